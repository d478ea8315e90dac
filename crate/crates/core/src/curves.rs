//! (-1)-classes, the divisors `L_m` and `C_m`, and ampleness certificates.
//!
//! On a general rational elliptic surface the only curves of negative
//! self-intersection are the (-1)-curves, so by Nakai–Moishezon a class `L`
//! is ample as soon as `L^2 > 0`, `L . (-k) > 0` and `L . C > 0` for every
//! (-1)-class `C`. There are infinitely many such `C`; they are enumerated
//! by degree `alpha` (the `h`-coefficient), and the part above a finite
//! degree is handled by an explicit lower bound.
//!
//! A (-1)-class is written `C = alpha h - sum beta_i e_i` with
//!
//! ```text
//! alpha^2 - sum beta_i^2 = -1,     3 alpha - sum beta_i = 1.
//! ```

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cremona::phi_pullback_closed;
use crate::error::{Error, Result};
use crate::json_int;
use crate::lattice::{canonical_class, degree, pairing, to_triple_form, LatticeVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    MinusOne,
    MinusTwoRoot,
    Other,
}

/// Sorts a class by its square and anticanonical degree.
pub fn classify(v: &LatticeVector) -> CurveKind {
    let sq = v.square();
    let deg = degree(v);
    if sq == BigInt::from(-1) && deg == BigInt::from(1) {
        CurveKind::MinusOne
    } else if sq == BigInt::from(-2) && deg.is_zero() {
        CurveKind::MinusTwoRoot
    } else {
        CurveKind::Other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveClass {
    pub vector: LatticeVector,
    pub kind: CurveKind,
}

impl CurveClass {
    pub fn new(vector: LatticeVector) -> Self {
        let kind = classify(&vector);
        CurveClass { vector, kind }
    }

    /// Builds `alpha h - sum beta_i e_i`.
    pub fn from_alpha_beta(alpha: i64, beta: [i64; 9]) -> Self {
        let mut c = [0i64; 10];
        c[0] = alpha;
        for (i, b) in beta.iter().enumerate() {
            c[i + 1] = -b;
        }
        CurveClass::new(LatticeVector::from_i64(c))
    }

    pub fn alpha(&self) -> &BigInt {
        self.vector.h_coeff()
    }

    /// `beta_i`, `1 <= i <= 9`.
    pub fn beta(&self, i: usize) -> BigInt {
        -self.vector.e_coeff(i)
    }

    /// `gamma_i = beta_{3i-2} + beta_{3i-1} + beta_{3i}`, `1 <= i <= 3`.
    pub fn gamma(&self, i: usize) -> BigInt {
        (3 * i - 2..=3 * i).map(|j| self.beta(j)).sum()
    }

    /// `(alpha, beta_1, ..., beta_9)` as machine integers, when they fit.
    pub fn alpha_beta(&self) -> Option<(i64, [i64; 9])> {
        let alpha = self.alpha().to_i64()?;
        let mut beta = [0i64; 9];
        for (i, b) in beta.iter_mut().enumerate() {
            *b = self.beta(i + 1).to_i64()?;
        }
        Some((alpha, beta))
    }
}

/// All (-1)-classes with `0 <= alpha <= alpha_max`, ordered
/// lexicographically by `(alpha, beta_1, ..., beta_9)`.
///
/// Each degree is an independent shard; shards run in parallel and are
/// concatenated in degree order.
pub fn enumerate_minus_one_classes(alpha_max: u32) -> Vec<CurveClass> {
    (0..=alpha_max)
        .into_par_iter()
        .map(minus_one_classes_of_degree)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// The (-1)-classes of a single degree `alpha`, in lexicographic order of `beta`.
pub fn minus_one_classes_of_degree(alpha: u32) -> Vec<CurveClass> {
    let alpha = i64::from(alpha);
    let mut out = Vec::new();
    let mut beta = [0i64; 9];
    search(&mut beta, 0, 3 * alpha - 1, alpha * alpha + 1, &mut |b| {
        out.push(CurveClass::from_alpha_beta(alpha, *b))
    });
    out
}

/// Fills `beta[pos..]` so that the remaining entries sum to `sum` and their
/// squares sum to `sq`. Branches are cut by parity (`b^2 = b mod 2`) and by
/// Cauchy–Schwarz (`sum^2 <= r * sq` for `r` remaining entries).
fn search(beta: &mut [i64; 9], pos: usize, sum: i64, sq: i64, emit: &mut impl FnMut(&[i64; 9])) {
    let r = (9 - pos) as i64;
    if sq < 0 || (sum - sq).rem_euclid(2) != 0 || sum * sum > r * sq {
        return;
    }
    if r == 1 {
        if sum * sum == sq {
            beta[8] = sum;
            emit(beta);
        }
        return;
    }
    let bound = isqrt(sq);
    for b in -bound..=bound {
        beta[pos] = b;
        search(beta, pos + 1, sum - b, sq - b * b, emit);
    }
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `L_m = h + phi_m^* h + m k`.
pub fn build_l(m: u64) -> Result<LatticeVector> {
    if m < 1 {
        return Err(Error::arg("L_m needs m >= 1"));
    }
    let h = LatticeVector::h();
    let k = canonical_class().scale(&BigInt::from(m));
    Ok(&(&h + &phi_pullback_closed(m)) + &k)
}

/// `C_m = 3h + 3 phi_m^* h + (m - 2) k`.
pub fn build_c(m: u64) -> Result<LatticeVector> {
    if m < 1 {
        return Err(Error::arg("C_m needs m >= 1"));
    }
    let h3 = LatticeVector::h().scale_i64(3);
    let p3 = phi_pullback_closed(m).scale_i64(3);
    let k = canonical_class().scale(&(BigInt::from(m) - 2));
    Ok(&(&h3 + &p3) + &k)
}

pub const HYPOTHESIS_NO_MINUS_TWO: &str =
    "S is general: no (-2)-curves, so (-1)-curves are the only negative curves";
pub const HYPOTHESIS_PULLBACK_NEF: &str =
    "phi_m^* h is nef as the pullback of a nef class; verified only on the enumerated range";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NonPositiveSquare,
    NonPositiveFiberDegree,
    NonPositiveOnCurve,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    AmpleCertified,
    AmpleUpToDegree,
    NotAmple {
        reason: FailureReason,
        witness: Option<CurveClass>,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::AmpleCertified => "ample_certified",
            Verdict::AmpleUpToDegree => "ample_up_to_degree",
            Verdict::NotAmple { .. } => "not_ample",
        }
    }
}

/// `target = coeff_h h + coeff_pullback phi_m^* h + coeff_k k` with
/// `coeff_pullback >= 0` and `coeff_h > 0`. On a (-1)-class of degree
/// `alpha` this gives `target . C >= coeff_h alpha - coeff_k`, positive for
/// every `alpha > threshold_alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBound {
    #[serde(with = "json_int")]
    pub coeff_h: BigInt,
    #[serde(with = "json_int")]
    pub coeff_pullback: BigInt,
    #[serde(with = "json_int")]
    pub coeff_k: BigInt,
    #[serde(with = "json_int")]
    pub threshold_alpha: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleCertificate {
    pub target: LatticeVector,
    pub m: Option<u64>,
    pub checked_alpha_max: u64,
    pub classes_checked: usize,
    #[serde(with = "json_int")]
    pub square: BigInt,
    #[serde(with = "json_int")]
    pub fiber_degree: BigInt,
    #[serde(with = "json_int::option")]
    pub min_curve_pairing: Option<BigInt>,
    pub tail: Option<TailBound>,
    pub tail_certified: bool,
    pub verdict: Verdict,
    pub hypotheses: Vec<String>,
}

impl AmpleCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::AmpleCertified
    }
}

/// Splits `target` as `x h + t phi_m^* h + y k` and derives the tail bound.
/// Returns `None` when no such split with `t >= 0`, `x > 0` exists.
pub fn tail_bound(target: &LatticeVector, m: u64) -> Option<TailBound> {
    if m < 1 {
        return None;
    }
    let (l_h, l) = to_triple_form(target)?;
    let (p_h, c) = to_triple_form(&phi_pullback_closed(m))?;
    // block g of e-coordinates: -l_g = -t c_g + y, so l_g = t c_g - y
    let (t, rem) = (&l[1] - &l[0]).div_rem(&(&c[1] - &c[0]));
    if !rem.is_zero() || t.is_negative() {
        return None;
    }
    let y = &t * &c[0] - &l[0];
    if &t * &c[2] - &y != l[2] {
        return None;
    }
    // h-coordinate: l_h = x + t p_h - 3y
    let x: BigInt = &l_h - &t * &p_h + &y * 3;
    if !x.is_positive() {
        return None;
    }
    let threshold_alpha = y.div_floor(&x);
    Some(TailBound {
        coeff_h: x,
        coeff_pullback: t,
        coeff_k: y,
        threshold_alpha,
    })
}

/// Nakai–Moishezon test of `target` against all (-1)-classes of degree at
/// most `alpha_cap`, optionally closing the tail `alpha > alpha_cap` with the
/// bound from [`tail_bound`] for the map `phi_{tail_rule_m}`.
pub fn ample_test(target: &LatticeVector, alpha_cap: u32, tail_rule_m: Option<u64>) -> AmpleCertificate {
    let classes = enumerate_minus_one_classes(alpha_cap);
    ample_test_with(target, &classes, alpha_cap, tail_rule_m)
}

/// As [`ample_test`], reusing a precomputed enumeration. Classes of degree
/// above `alpha_cap` in `classes` are ignored.
pub fn ample_test_with(
    target: &LatticeVector,
    classes: &[CurveClass],
    alpha_cap: u32,
    tail_rule_m: Option<u64>,
) -> AmpleCertificate {
    let cap = BigInt::from(alpha_cap);
    let in_range: Vec<&CurveClass> = classes.iter().filter(|c| *c.alpha() <= cap).collect();
    let square = target.square();
    let fiber_degree = degree(target);

    let mut min_pairing: Option<BigInt> = None;
    let mut witness: Option<CurveClass> = None;
    for c in &in_range {
        let p = pairing(target, &c.vector);
        if witness.is_none() && !p.is_positive() {
            witness = Some((*c).clone());
        }
        if min_pairing.as_ref().is_none_or(|mp| p < *mp) {
            min_pairing = Some(p);
        }
    }

    let mut hypotheses = vec![HYPOTHESIS_NO_MINUS_TWO.to_string()];
    let tail = tail_rule_m.and_then(|m| tail_bound(target, m));
    let tail_certified = match (&tail, tail_rule_m) {
        (Some(tb), Some(m)) => {
            let nef_on_range = tb.coeff_pullback.is_zero() || {
                let p = phi_pullback_closed(m);
                in_range.iter().all(|c| !pairing(&p, &c.vector).is_negative())
            };
            if !tb.coeff_pullback.is_zero() {
                hypotheses.push(HYPOTHESIS_PULLBACK_NEF.to_string());
            }
            nef_on_range && tb.threshold_alpha <= cap
        }
        _ => false,
    };

    let verdict = if !square.is_positive() {
        Verdict::NotAmple {
            reason: FailureReason::NonPositiveSquare,
            witness,
        }
    } else if !fiber_degree.is_positive() {
        Verdict::NotAmple {
            reason: FailureReason::NonPositiveFiberDegree,
            witness,
        }
    } else if witness.is_some() {
        Verdict::NotAmple {
            reason: FailureReason::NonPositiveOnCurve,
            witness,
        }
    } else if tail_certified {
        Verdict::AmpleCertified
    } else {
        Verdict::AmpleUpToDegree
    };

    AmpleCertificate {
        target: target.clone(),
        m: tail_rule_m,
        checked_alpha_max: u64::from(alpha_cap),
        classes_checked: in_range.len(),
        square,
        fiber_degree,
        min_curve_pairing: min_pairing,
        tail,
        tail_certified,
        verdict,
        hypotheses,
    }
}

/// Numeric skeleton of freeness: certified ample and `L . (-k) >= 2`.
pub fn free_numeric_test(target: &LatticeVector, cert: &AmpleCertificate) -> bool {
    cert.target == *target && cert.is_certified() && degree(target) >= BigInt::from(2)
}
