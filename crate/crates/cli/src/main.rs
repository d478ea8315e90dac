use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nkcy::cremona::{apply_word, phi_pullback_closed, phi_pullback_iterative, CremonaWord};
use nkcy::curves::{ample_test, build_c, build_l, enumerate_minus_one_classes};
use nkcy::report::{emit_report, theorem_report, Format};
use nkcy::smoothing::{betti_computation, d_semistability_check, restriction_matrix, SurfaceModel};
use nkcy::suite::{run_suite, SuiteConfig};
use nkcy::{Error, LatticeVector};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "nkcy", version, about = "Lattice computations for smoothed Calabi-Yau degenerations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Table,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Table => Format::Table,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    L,
    C,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// b2, Euler number, algebraic dimension and certificates of X(m) in dimension N.
    Invariants {
        #[arg(long = "N")]
        dim: u32,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        alpha_cap: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernel rank of the restriction map via Smith normal form.
    Betti {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        json: bool,
        /// Include the restriction matrix and its labels in the JSON output.
        #[arg(long)]
        emit_matrices: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ampleness certificate for L_m or C_m, as JSON.
    Certify {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        alpha_cap: Option<u32>,
        #[arg(long, value_enum, default_value = "l")]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All (-1)-classes up to the given degree, one per line.
    EnumerateCurves {
        #[arg(long)]
        max_degree: u32,
        /// Write RFC 4180 CSV to this file instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Checks 3(h + phi_m^* h) + 2f = m f + c_m.
    DSemistable {
        #[arg(long)]
        m: u64,
    },
    /// Runs the full verification suite.
    Verify {
        #[arg(long, default_value_t = 50)]
        m_max: u64,
        #[arg(long, default_value_t = 12)]
        alpha_cap: u32,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        n_set: Vec<u32>,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// phi_m^* applied to a class, by closed form and by iterated reflections.
    Pullback {
        #[arg(long)]
        m: u64,
        /// Apply this word instead of phi_m, e.g. "1,2,3;4,5,6".
        #[arg(long)]
        word: Option<String>,
        /// Class in text form "a;b1,...,b9"; defaults to h.
        #[arg(long)]
        vector: Option<String>,
    },
}

enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(msg) => Failure::Check(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn output(body: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Invariants { dim, m, format, alpha_cap, out } => {
            let report = theorem_report(dim, m, alpha_cap)?;
            output(&emit_report(&report, format.into())?, out.as_deref())
        }
        Command::Betti { n, m, json, emit_matrices, out } => betti(n, m, json, emit_matrices, out.as_deref()),
        Command::Certify { m, alpha_cap, target, out } => {
            let v = match target {
                Target::L => build_l(m)?,
                Target::C => build_c(m)?,
            };
            let cap = alpha_cap.unwrap_or_else(|| u32::try_from(m).unwrap_or(u32::MAX));
            let cert = ample_test(&v, cap, Some(m));
            output(&pretty(&cert), out.as_deref())?;
            if cert.is_certified() {
                Ok(())
            } else {
                Err(Failure::Check(format!("verdict {}", cert.verdict.label())))
            }
        }
        Command::EnumerateCurves { max_degree, csv } => enumerate(max_degree, csv.as_deref()),
        Command::DSemistable { m } => {
            let d = d_semistability_check(m)?;
            output(&pretty(&d), None)?;
            if d.holds {
                Ok(())
            } else {
                Err(Failure::Check(format!("d-semistability fails at m = {m}")))
            }
        }
        Command::Verify { m_max, alpha_cap, n_set, format, out, inject_fault } => {
            let cfg = SuiteConfig {
                m_max,
                alpha_cap,
                n_set,
                emit_path: out,
                format: format.into(),
                inject_fault,
            };
            let summary = run_suite(&cfg)?;
            if cfg.emit_path.is_none() {
                let body = match cfg.format {
                    Format::Table => summary.to_table(),
                    _ => pretty(&summary),
                };
                output(&body, None)?;
            }
            let first_failure = summary
                .failing()
                .next()
                .map(|c| format!("{}: {}", c.id, c.failure.as_deref().unwrap_or("")));
            match first_failure {
                None => Ok(()),
                Some(msg) => Err(Failure::Check(msg)),
            }
        }
        Command::Pullback { m, word, vector } => pullback(m, word, vector),
    }
}

fn betti(n: u32, m: u64, json: bool, emit_matrices: bool, out: Option<&Path>) -> Outcome {
    let model = SurfaceModel::new(n)?;
    let b = betti_computation(&model, m);
    let body = if json || emit_matrices {
        let mut value = serde_json::to_value(&b).expect("serialisable");
        if emit_matrices {
            value["restriction"] = serde_json::to_value(restriction_matrix(&model, m)).expect("serialisable");
        }
        pretty(&value)
    } else {
        format!(
            "n = {n}, m = {m}, rho_T = {}\nb2(X0) = {}\nb2(X) = {}\nimage rank = {}\n",
            b.rho_t, b.b2_x0, b.b2_x, b.image_rank
        )
    };
    output(&body, out)?;
    if m >= 1 && !b.matches_formula {
        return Err(Failure::Check(format!("b2(X0) = {} != m + rho_T + 1", b.b2_x0)));
    }
    Ok(())
}

fn enumerate(max_degree: u32, csv_path: Option<&Path>) -> Outcome {
    let classes = enumerate_minus_one_classes(max_degree);
    let buf: Vec<u8> = Vec::new();
    let mut w = csv::Writer::from_writer(buf);
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(["alpha", "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9"])
        .map_err(io)?;
    for c in &classes {
        let coords = c.vector.coords();
        let mut row = vec![coords[0].to_string()];
        row.extend(coords[1..].iter().map(|b| (-b).to_string()));
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    let body = String::from_utf8(bytes).expect("ascii digits");
    output(&body, csv_path)
}

#[derive(Serialize)]
struct PullbackOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<CremonaWord>,
    vector: LatticeVector,
    image: LatticeVector,
    /// Only for `h`, where the closed form applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    closed: Option<LatticeVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

fn pullback(m: u64, word: Option<String>, vector: Option<String>) -> Outcome {
    let x: LatticeVector = match &vector {
        Some(s) => s.parse()?,
        None => LatticeVector::h(),
    };
    let result = match word {
        Some(w) => {
            let w: CremonaWord = w.parse()?;
            PullbackOutput {
                m: None,
                image: apply_word(&w, &x),
                word: Some(w),
                vector: x,
                closed: None,
                agree: None,
            }
        }
        None => {
            let image = phi_pullback_iterative(m, &x);
            let closed = (x == LatticeVector::h()).then(|| phi_pullback_closed(m));
            let agree = closed.as_ref().map(|c| *c == image);
            PullbackOutput {
                m: Some(m),
                word: None,
                vector: x,
                image,
                closed,
                agree,
            }
        }
    };
    output(&pretty(&result), None)?;
    if result.agree == Some(false) {
        return Err(Failure::Check(format!("closed form differs at m = {m}")));
    }
    Ok(())
}
