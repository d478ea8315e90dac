//! Euler numbers of the strata of `X_0(m)` and of its smoothing `X(m)`.
//!
//! With `σ_n` the Euler number of a smooth degree `n+1` hypersurface in
//! `P^n`, `d_n = (n+1) n^n` the number of nodal fibers of `T -> P^1` and
//! `δ_n = (-1)^n d_n`:
//!
//! ```text
//! e(T)    = 2σ + δ
//! e(X_2)  = 6σ + 3δ
//! e(Γ_m)  = γ_m σ + 18δ
//! e(X_1)  = (γ_m + 6)σ + 21δ
//! e(X_12) = 12σ
//! e(X)    = e(X_1) + e(X_2) - 2 e(X_12) = (γ_m - 12)σ + 24δ
//! ```
//!
//! where `γ_m = e(C_m) = -18(27m^2 - 2m + 5)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json_int;

fn require_positive(name: &str, x: u64) -> Result<()> {
    if x < 1 {
        return Err(Error::arg(format!("{name} must be >= 1")));
    }
    Ok(())
}

/// `((-n)^{n+1} + n^2 + 2n) / (n+1)`; the division is checked to be exact.
pub fn sigma(n: u32) -> Result<BigInt> {
    require_positive("n", u64::from(n))?;
    let nb = BigInt::from(n);
    let num: BigInt = Pow::pow(-&nb, n + 1) + &nb * &nb + &nb * 2;
    let (q, r) = num.div_rem(&(&nb + 1));
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "n + 1 does not divide the hypersurface Euler numerator for n = {n}"
        )));
    }
    Ok(q)
}

/// `d_n = (n+1) n^n`.
pub fn discriminant_degree(n: u32) -> Result<BigInt> {
    require_positive("n", u64::from(n))?;
    let nb = BigInt::from(n);
    Ok((&nb + 1) * Pow::pow(&nb, n))
}

/// `δ_n = (-1)^n d_n`.
pub fn delta(n: u32) -> Result<BigInt> {
    let d = discriminant_degree(n)?;
    Ok(if n.is_multiple_of(2) { d } else { -d })
}

/// `γ_m = -18(27m^2 - 2m + 5)`.
pub fn gamma(m: u64) -> Result<BigInt> {
    require_positive("m", m)?;
    let mb = BigInt::from(m);
    Ok((&mb * &mb * 27 - &mb * 2 + 5) * -18)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerBreakdown {
    pub n: u32,
    pub m: u64,
    #[serde(with = "json_int")]
    pub sigma_n: BigInt,
    #[serde(with = "json_int")]
    pub d_n: BigInt,
    #[serde(with = "json_int")]
    pub delta_n: BigInt,
    #[serde(with = "json_int")]
    pub gamma_m: BigInt,
    #[serde(with = "json_int")]
    pub e_t: BigInt,
    #[serde(with = "json_int")]
    pub e_x1: BigInt,
    #[serde(with = "json_int")]
    pub e_x2: BigInt,
    #[serde(with = "json_int")]
    pub e_x12: BigInt,
    #[serde(with = "json_int")]
    pub e_cm: BigInt,
    #[serde(with = "json_int")]
    pub e_gamma_m: BigInt,
    #[serde(with = "json_int")]
    pub e_x: BigInt,
}

/// The closed formula `(γ_m - 12) σ_n + 24(n+1)(-n)^n`, evaluated on its own.
pub fn euler_closed_form(n: u32, m: u64) -> Result<BigInt> {
    let nb = BigInt::from(n);
    let tail: BigInt = (&nb + 1) * Pow::pow(-&nb, n) * 24;
    Ok((gamma(m)? - 12) * sigma(n)? + tail)
}

pub fn euler_breakdown(n: u32, m: u64) -> Result<EulerBreakdown> {
    let sigma_n = sigma(n)?;
    let d_n = discriminant_degree(n)?;
    let delta_n = delta(n)?;
    let gamma_m = gamma(m)?;

    let e_t = &sigma_n * 2 + &delta_n;
    let e_x2 = &e_t * 3;
    let e_cm = gamma_m.clone();
    let e_gamma_m = &gamma_m * &sigma_n + &delta_n * 18;
    let e_x1 = &e_x2 + &e_gamma_m;
    let e_x12 = &sigma_n * 12;
    let e_x = &e_x1 + &e_x2 - &e_x12 * 2;

    let closed = euler_closed_form(n, m)?;
    if e_x != closed {
        return Err(Error::Internal(format!(
            "stratified Euler number {e_x} differs from closed form {closed} at n = {n}, m = {m}"
        )));
    }
    let expected_x1 = (&gamma_m + 6) * &sigma_n + &delta_n * 21;
    if e_x1 != expected_x1 {
        return Err(Error::Internal(format!("e(X_1) mismatch at n = {n}, m = {m}")));
    }

    Ok(EulerBreakdown {
        n,
        m,
        sigma_n,
        d_n,
        delta_n,
        gamma_m,
        e_t,
        e_x1,
        e_x2,
        e_x12,
        e_cm,
        e_gamma_m,
        e_x,
    })
}
