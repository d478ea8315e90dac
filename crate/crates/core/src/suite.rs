//! One-shot verification run over every module's invariants.

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cremona::{phi_pullback_closed, phi_pullback_sequence, psi_step, reflect, Root};
use crate::curves::{
    ample_test_with, build_c, build_l, enumerate_minus_one_classes, free_numeric_test, CurveClass,
};
use crate::error::{Error, Result};
use crate::lattice::{canonical_class, degree, fiber_class, from_triple_form, pairing, LatticeVector};
use crate::report::Format;
use crate::smoothing::{
    betti_computation, d_semistability_check_with, independence_rank, nonprojectivity_kernel,
    SurfaceModel,
};
use crate::topology::{euler_breakdown, euler_closed_form, gamma};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub m_max: u64,
    pub alpha_cap: u32,
    pub n_set: Vec<u32>,
    pub emit_path: Option<PathBuf>,
    pub format: Format,
    /// Perturbs `c_m` by `e_1` in the d-semistability check.
    #[doc(hidden)]
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            m_max: 50,
            alpha_cap: 12,
            n_set: vec![2, 3, 4, 5],
            emit_path: None,
            format: Format::Json,
            inject_fault: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_max < 1 {
            return Err(Error::arg("m_max must be >= 1"));
        }
        if self.n_set.is_empty() {
            return Err(Error::arg("n_set must be nonempty"));
        }
        if self.n_set.contains(&0) {
            return Err(Error::arg("n_set entries must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub passed: bool,
    pub cases: u64,
    /// First failing case, if any.
    pub failure: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub m_max: u64,
    pub alpha_cap: u32,
    pub n_set: Vec<u32>,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteSummary {
    pub fn failing(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// The summary with timings zeroed, for byte-for-byte comparison.
    pub fn without_timings(&self) -> SuiteSummary {
        let mut s = self.clone();
        for c in &mut s.checks {
            c.elapsed_ms = 0;
        }
        s
    }

    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status}  {:<width$}  {:>8} cases  {:>7} ms",
                c.id, c.cases, c.elapsed_ms
            ));
            if let Some(f) = &c.failure {
                out.push_str(&format!("  {f}"));
            }
            out.push('\n');
        }
        out
    }
}

type CheckResult = std::result::Result<u64, String>;

fn timed(id: &str, f: impl FnOnce() -> CheckResult) -> CheckOutcome {
    let start = Instant::now();
    let res = f();
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match res {
        Ok(cases) => CheckOutcome {
            id: id.into(),
            passed: true,
            cases,
            failure: None,
            elapsed_ms,
        },
        Err(msg) => CheckOutcome {
            id: id.into(),
            passed: false,
            cases: 0,
            failure: Some(msg),
            elapsed_ms,
        },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every check in a fixed order. Configuration errors are returned as
/// `Err`; check failures are recorded in the summary.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteSummary> {
    cfg.validate()?;
    let ms: Vec<u64> = (1..=cfg.m_max).collect();
    let cap_m = cfg.m_max.min(u64::from(cfg.alpha_cap));

    let checks = vec![
        timed("reflection_properties", check_reflections),
        timed("pullback_closed_vs_iterative", || check_pullback(cfg.m_max)),
        timed("l_c_identities", || check_l_c(&ms)),
        timed("ampleness_certificates", || check_ampleness(cap_m)),
        timed("proof_bound", || check_proof_bound(cap_m)),
        timed("d_semistability", || check_d_semistability(&ms, cfg.inject_fault)),
        timed("forced_vanishing", || check_forced_vanishing(&ms)),
        timed("betti_grid", || check_betti(&cfg.n_set, &ms)),
        timed("euler_grid", || check_euler(&cfg.n_set, &ms)),
    ];
    let passed = checks.iter().all(|c| c.passed);
    let summary = SuiteSummary {
        m_max: cfg.m_max,
        alpha_cap: cfg.alpha_cap,
        n_set: cfg.n_set.clone(),
        passed,
        checks,
    };
    if let Some(path) = &cfg.emit_path {
        let body = match cfg.format {
            Format::Table => summary.to_table(),
            _ => serde_json::to_string_pretty(&summary).map_err(|e| Error::Internal(e.to_string()))? + "\n",
        };
        std::fs::write(path, body)?;
    }
    Ok(summary)
}

fn sample_vectors() -> Vec<LatticeVector> {
    let mut v: Vec<LatticeVector> = std::iter::once(LatticeVector::h())
        .chain((1..=9).map(|i| LatticeVector::e(i).expect("index in range")))
        .collect();
    v.push(canonical_class());
    v.push(build_l(1).expect("m >= 1"));
    v.push(build_c(2).expect("m >= 1"));
    v.push(phi_pullback_closed(3));
    v.push(LatticeVector::from_i64([7, -3, 0, 2, 5, -1, 0, 4, -2, 1]));
    v.extend(enumerate_minus_one_classes(1).into_iter().map(|c| c.vector));
    v
}

fn check_reflections() -> CheckResult {
    let vs = sample_vectors();
    let k = canonical_class();
    let mut cases = 0;
    for r in Root::all() {
        ensure(reflect(&k, &r) == k, || format!("{:?} moves k", r.indices()))?;
        let images: Vec<LatticeVector> = vs.iter().map(|x| reflect(x, &r)).collect();
        for (x, rx) in vs.iter().zip(&images) {
            ensure(reflect(rx, &r) == *x, || format!("{:?} not an involution on {x}", r.indices()))?;
        }
        for i in 0..vs.len() {
            for j in i..vs.len() {
                ensure(pairing(&images[i], &images[j]) == pairing(&vs[i], &vs[j]), || {
                    format!("{:?} not isometric on {} , {}", r.indices(), vs[i], vs[j])
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn check_pullback(m_max: u64) -> CheckResult {
    let h = LatticeVector::h();
    let tf = |a: i64, c: [i64; 3]| from_triple_form(a.into(), c.map(BigInt::from));
    ensure(psi_step(&h) == tf(8, [1, 2, 4]), || format!("psi^*(h) = {}", psi_step(&h)))?;
    for (m, v) in phi_pullback_sequence(&h).enumerate().take(m_max as usize + 1) {
        let closed = phi_pullback_closed(m as u64);
        ensure(closed == v, || format!("m = {m}: closed {closed} != iterative {v}"))?;
        if m == 1 {
            ensure(v == tf(28, [6, 9, 12]), || format!("psi_1^*(h) = {v}"))?;
        }
    }
    Ok(m_max + 1)
}

fn check_l_c(ms: &[u64]) -> CheckResult {
    let k = canonical_class();
    let f = fiber_class();
    ms.par_iter().try_for_each(|&m| {
        let mb = BigInt::from(m);
        let l = build_l(m).map_err(|e| e.to_string())?;
        let c = build_c(m).map_err(|e| e.to_string())?;
        ensure(l.square() == &mb * &mb * 54 - &mb * 12 + 4, || format!("L_{m}^2"))?;
        ensure(degree(&l) == BigInt::from(6), || format!("L_{m}.(-K)"))?;
        ensure(degree(&c) == BigInt::from(18), || format!("C_{m}.(-K)"))?;
        let hp = &LatticeVector::h() + &phi_pullback_closed(m);
        ensure(c == &(&l + &hp.scale_i64(2)) + &f.scale_i64(2), || format!("C_{m} decomposition"))?;
        let adj = -pairing(&(&k + &c), &c);
        let g = gamma(m).map_err(|e| e.to_string())?;
        ensure(adj == g, || format!("m = {m}: -(K+C).C = {adj} but gamma = {g}"))
    })?;
    Ok(ms.len() as u64)
}

fn check_ampleness(cap_m: u64) -> CheckResult {
    let classes = enumerate_minus_one_classes(cap_m as u32);
    (1..=cap_m).into_par_iter().try_for_each(|m| {
        for (name, v) in [("L", build_l(m)), ("C", build_c(m))] {
            let v = v.map_err(|e| e.to_string())?;
            let cert = ample_test_with(&v, &classes, m as u32, Some(m));
            ensure(cert.is_certified(), || format!("{name}_{m}: {}", cert.verdict.label()))?;
            ensure(free_numeric_test(&v, &cert), || format!("{name}_{m} not free"))?;
        }
        Ok::<(), String>(())
    })?;
    Ok(2 * cap_m)
}

fn check_proof_bound(cap_m: u64) -> CheckResult {
    let classes = enumerate_minus_one_classes(cap_m as u32);
    let counts = (1..=cap_m)
        .into_par_iter()
        .map(|m| {
            let l = build_l(m).map_err(|e| e.to_string())?;
            let mb = BigInt::from(m);
            let mut n = 0u64;
            for c in classes.iter().filter(|c| *c.alpha() <= mb) {
                let bound = (&mb + c.alpha()) * 2;
                let p = pairing(&l, &c.vector);
                ensure(p >= bound, || proof_bound_failure(m, c, &p))?;
                n += 1;
            }
            Ok(n)
        })
        .collect::<std::result::Result<Vec<u64>, String>>()?;
    Ok(counts.iter().sum())
}

fn proof_bound_failure(m: u64, c: &CurveClass, p: &BigInt) -> String {
    format!("m = {m}: L_m . ({}) = {p} < 2m + 2alpha", c.vector)
}

fn check_d_semistability(ms: &[u64], inject_fault: bool) -> CheckResult {
    ms.par_iter().try_for_each(|&m| {
        let mut c = build_c(m).map_err(|e| e.to_string())?;
        if inject_fault {
            c = &c + &LatticeVector::e(1).expect("index in range");
        }
        let d = d_semistability_check_with(m, &c).map_err(|e| e.to_string())?;
        ensure(d.holds, || {
            format!("m = {m}: {} != {}", d.normal_bundle_class, d.center_class)
        })
    })?;
    Ok(ms.len() as u64)
}

fn check_forced_vanishing(ms: &[u64]) -> CheckResult {
    let zero = BigInt::from(0);
    ms.par_iter().try_for_each(|&m| {
        ensure(independence_rank(m) == 3, || format!("m = {m}: h, phi^*h, k dependent"))?;
        let r = nonprojectivity_kernel(m, &zero, &zero, &zero).map_err(|e| e.to_string())?;
        ensure(r.forced.is_some(), || format!("m = {m}: effectivity does not force a = a' = 0"))
    })?;
    Ok(ms.len() as u64)
}

fn check_betti(n_set: &[u32], ms: &[u64]) -> CheckResult {
    // n = 1 has no Picard model of T here; it only enters the Euler grid
    let grid: Vec<(u32, u64)> = n_set
        .iter()
        .filter(|&&n| n >= 2)
        .flat_map(|&n| ms.iter().map(move |&m| (n, m)))
        .collect();
    grid.par_iter().try_for_each(|&(n, m)| {
        let model = SurfaceModel::new(n).map_err(|e| e.to_string())?;
        let b = betti_computation(&model, m);
        let want = m + model.rho_t as u64 + 1;
        ensure(b.b2_x0 as u64 == want, || format!("n = {n}, m = {m}: b2(X0) = {} != {want}", b.b2_x0))?;
        ensure(b.image_rank == model.rho_t + 2, || format!("n = {n}, m = {m}: image rank {}", b.image_rank))?;
        let theorem = if n == 2 { m + 10 } else { m + 2 };
        ensure(b.b2_x as u64 == theorem, || format!("n = {n}, m = {m}: b2(X) = {}", b.b2_x))
    })?;
    Ok(grid.len() as u64)
}

fn check_euler(n_set: &[u32], ms: &[u64]) -> CheckResult {
    let grid: Vec<(u32, u64)> = n_set.iter().flat_map(|&n| ms.iter().map(move |&m| (n, m))).collect();
    grid.par_iter().try_for_each(|&(n, m)| {
        let b = euler_breakdown(n, m).map_err(|e| e.to_string())?;
        let mv = &b.e_x1 + &b.e_x2 - &b.e_x12 * 2;
        let closed = euler_closed_form(n, m).map_err(|e| e.to_string())?;
        ensure(mv == closed, || format!("n = {n}, m = {m}: {mv} != {closed}"))?;
        if n == 2 {
            ensure(b.e_x == BigInt::from(288), || format!("m = {m}: e = {} for n = 2", b.e_x))?;
        }
        Ok::<(), String>(())
    })?;
    Ok(grid.len() as u64)
}
