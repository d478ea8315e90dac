//! The per-`(N, m)` summary of every invariant, and its serialisations.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::curves::{ample_test_with, build_c, build_l, enumerate_minus_one_classes, free_numeric_test};
use crate::error::{Error, Result};
use crate::json_int;
use crate::smoothing::{betti_collapsed, betti_computation, d_semistability_check, independence_rank, nonprojectivity_kernel, SurfaceModel};
use crate::topology::{euler_breakdown, EulerBreakdown};

/// Above this `m` the Betti numbers come from the collapsed matrix.
pub const DIRECT_BETTI_LIMIT: u64 = 256;

/// Degree cap used for ampleness certificates when the caller gives none.
pub const DEFAULT_ALPHA_CAP: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?}, expected json|table|csv"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub alpha_cap: u32,
    pub ample_l: String,
    pub ample_c: String,
    pub free_l: bool,
    pub free_c: bool,
    pub d_semistable: bool,
    pub independence_rank: usize,
    /// Effectivity forces `a = a' = 0` in the matching condition.
    pub forced_vanishing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    #[serde(rename = "N")]
    pub dim: u32,
    pub n: u32,
    pub m: u64,
    /// `N >= 4`; for `N = 3` only the Euler number is meaningful.
    pub in_theorem_range: bool,
    pub rho_t: Option<usize>,
    pub b2_x0: Option<usize>,
    pub b2: Option<usize>,
    /// `m + 10` for `N = 4`, `m + 2` for `N >= 5`.
    pub b2_expected: Option<u64>,
    #[serde(with = "json_int")]
    pub e: BigInt,
    /// Algebraic dimension `N - 2`.
    pub a: u32,
    pub euler: EulerBreakdown,
    pub certification: Certification,
    pub hypotheses: Vec<String>,
}

pub fn expected_b2(dim: u32, m: u64) -> Option<u64> {
    match dim {
        4 => Some(m + 10),
        d if d >= 5 => Some(m + 2),
        _ => None,
    }
}

/// All invariants of `X(m)` in dimension `N = n + 2`.
///
/// `alpha_cap` bounds the (-1)-class enumeration for the certificates;
/// the default is `min(m, 12)`. A cap below `m` yields
/// `ample_up_to_degree` rather than a full certificate.
pub fn theorem_report(dim: u32, m: u64, alpha_cap: Option<u32>) -> Result<InvariantReport> {
    if dim < 3 {
        return Err(Error::arg(format!("N must be >= 3, got {dim}")));
    }
    if m < 1 {
        return Err(Error::arg("m must be >= 1"));
    }
    let n = dim - 2;
    let euler = euler_breakdown(n, m)?;

    let (rho_t, b2_x0, b2) = if dim >= 4 {
        let model = SurfaceModel::new(n)?;
        let b = if m <= DIRECT_BETTI_LIMIT {
            betti_computation(&model, m)
        } else {
            betti_collapsed(&model, m)
        };
        (Some(model.rho_t), Some(b.b2_x0), Some(b.b2_x))
    } else {
        (None, None, None)
    };
    let b2_expected = expected_b2(dim, m);
    if let (Some(got), Some(want)) = (b2, b2_expected) {
        if got as u64 != want {
            return Err(Error::Internal(format!(
                "b2 = {got} disagrees with m + rho_T = {want} at N = {dim}, m = {m}"
            )));
        }
    }

    let cap = alpha_cap.unwrap_or_else(|| DEFAULT_ALPHA_CAP.min(u32::try_from(m).unwrap_or(u32::MAX)));
    let classes = enumerate_minus_one_classes(cap);
    let l = build_l(m)?;
    let c = build_c(m)?;
    let cert_l = ample_test_with(&l, &classes, cap, Some(m));
    let cert_c = ample_test_with(&c, &classes, cap, Some(m));
    let zero = BigInt::from(0);
    let forced = nonprojectivity_kernel(m, &zero, &zero, &zero)?.forced.is_some();

    let certification = Certification {
        alpha_cap: cap,
        ample_l: cert_l.verdict.label().to_string(),
        ample_c: cert_c.verdict.label().to_string(),
        free_l: free_numeric_test(&l, &cert_l),
        free_c: free_numeric_test(&c, &cert_c),
        d_semistable: d_semistability_check(m)?.holds,
        independence_rank: independence_rank(m),
        forced_vanishing: forced,
    };

    let mut hypotheses = cert_l.hypotheses.clone();
    hypotheses.push("Pic S ⊕ Pic T surjects onto Pic X_12 (assumed, not verified)".into());
    if dim == 3 {
        hypotheses.push("N = 3 lies outside the theorem's range; only e is reported".into());
    }

    Ok(InvariantReport {
        dim,
        n,
        m,
        in_theorem_range: dim >= 4,
        rho_t,
        b2_x0,
        b2,
        b2_expected,
        e: euler.e_x.clone(),
        a: n,
        euler,
        certification,
        hypotheses,
    })
}

/// Serialises one report. JSON keys follow the struct field order.
pub fn emit_report(report: &InvariantReport, format: Format) -> Result<String> {
    emit_reports(std::slice::from_ref(report), format)
}

/// Serialises a grid of reports: a JSON array, or one table/CSV row each.
/// A single report in JSON is emitted as an object, not an array.
pub fn emit_reports(reports: &[InvariantReport], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let s = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(reports)
            };
            s.map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Internal(e.to_string()))
        }
        Format::Table => Ok(table(reports)),
        Format::Csv => Ok(csv(reports)),
    }
}

pub fn parse_report(s: &str) -> Result<InvariantReport> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_report(path: &Path, report: &InvariantReport, format: Format) -> Result<()> {
    std::fs::write(path, emit_report(report, format)?)?;
    Ok(())
}

const COLUMNS: [&str; 10] = ["N", "n", "m", "b2(X0)", "b2(X)", "e(X)", "a(X)", "L_m", "C_m", "d-ss"];

fn row(r: &InvariantReport) -> [String; 10] {
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    [
        r.dim.to_string(),
        r.n.to_string(),
        r.m.to_string(),
        opt(r.b2_x0),
        opt(r.b2),
        r.e.to_string(),
        r.a.to_string(),
        r.certification.ample_l.clone(),
        r.certification.ample_c.clone(),
        r.certification.d_semistable.to_string(),
    ]
}

fn table(reports: &[InvariantReport]) -> String {
    let rows: Vec<[String; 10]> = reports.iter().map(row).collect();
    let widths: Vec<usize> = (0..COLUMNS.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain(std::iter::once(COLUMNS[c].len()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let line = |cells: &[&str], out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&COLUMNS, &mut out);
    for r in &rows {
        let cells: Vec<&str> = r.iter().map(String::as_str).collect();
        line(&cells, &mut out);
    }
    out
}

fn csv(reports: &[InvariantReport]) -> String {
    let mut out = String::from("N,n,m,b2_x0,b2,e,a,ample_l,ample_c,d_semistable\n");
    for r in reports {
        let _ = writeln!(out, "{}", row(r).join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_report() {
        let r = theorem_report(4, 3, None).unwrap();
        assert_eq!(r.b2, Some(13));
        assert_eq!(r.e, 288.into());
        assert_eq!(r.a, 2);
        assert_eq!(r.certification.ample_l, "ample_certified");
        assert_eq!(r.certification.ample_c, "ample_certified");
        assert!(r.certification.free_l && r.certification.free_c);
        assert!(r.certification.d_semistable);
        assert!(r.certification.forced_vanishing);
        assert_eq!(r.certification.independence_rank, 3);
    }

    #[test]
    fn n5_reports() {
        let r = theorem_report(5, 3, None).unwrap();
        assert_eq!(r.b2, Some(5));
        assert_eq!(r.a, 3);
        let r = theorem_report(5, 1, None).unwrap();
        assert_eq!(r.e, (-15840).into());
    }

    #[test]
    fn n3_is_flagged() {
        let r = theorem_report(3, 2, None).unwrap();
        assert!(!r.in_theorem_range);
        assert_eq!(r.b2, None);
        assert_eq!(r.a, 1);
        assert!(theorem_report(2, 1, None).is_err());
        assert!(theorem_report(4, 0, None).is_err());
    }

    #[test]
    fn small_cap_is_not_a_full_certificate() {
        let r = theorem_report(4, 20, None).unwrap();
        assert_eq!(r.certification.alpha_cap, 12);
        assert_eq!(r.certification.ample_l, "ample_up_to_degree");
        assert!(!r.certification.free_l);
    }

    #[test]
    fn json_shape_and_round_trip() {
        let r = theorem_report(4, 1, None).unwrap();
        let s = emit_report(&r, Format::Json).unwrap();
        assert!(s.contains("\"e\": 288"));
        assert!(s.starts_with("{\n  \"N\": 4,\n  \"n\": 2,\n  \"m\": 1,"));
        assert_eq!(parse_report(&s).unwrap(), r);
        assert_eq!(emit_report(&r, Format::Json).unwrap(), s);
    }

    #[test]
    fn huge_values_become_strings() {
        let r = theorem_report(7, 100_000_000, Some(2)).unwrap();
        let s = emit_report(&r, Format::Json).unwrap();
        assert!(s.contains(&format!("\"e\": \"{}\"", r.e)));
        assert_eq!(parse_report(&s).unwrap(), r);
    }

    #[test]
    fn table_columns_line_up() {
        let reports: Vec<_> = [(4, 1), (5, 10), (6, 3)]
            .iter()
            .map(|&(d, m)| theorem_report(d, m, Some(1)).unwrap())
            .collect();
        let t = emit_reports(&reports, Format::Table).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        // every column is right-aligned, so the lines end in the same column
        let ends: Vec<usize> = lines.iter().map(|l| l.len()).collect();
        assert!(ends.windows(2).all(|w| w[0] == w[1]), "{t}");
        let csv = emit_reports(&reports, Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("4,2,1,12,11,288,2,"));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let r = theorem_report(4, 1, Some(1)).unwrap();
        let err = write_report(Path::new("/nonexistent-dir/x/report.json"), &r, Format::Json).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}
