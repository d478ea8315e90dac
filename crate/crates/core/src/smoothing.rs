//! Picard bookkeeping for the normal crossing variety `X_0 = X_1 ∪ X_2`.
//!
//! `X_2 = P^2 x T` and `X_1` is `P^2 x T` blown up along `m` copies of a
//! fiber `F_j` of the double locus and then along `Γ_m`. The double locus
//! `X_12` is the fiber product `S x_{P^1} T` with
//!
//! ```text
//! Pic X_12 = (Pic S ⊕ Pic T) / Z(-k_S, k_T).
//! ```
//!
//! `Pic X_0` is the kernel of the restriction map
//! `R = (ι_1^*, -ι_2^*) : Pic X_1 ⊕ Pic X_2 -> Pic X_12`, and `b_2` of the
//! smoothing is one less than its rank. The matrix of `R` is written in the
//! ambient lattice `Z^{10 + ρ_T}` and the quotient is handled by adjoining
//! the relation as an extra column.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cremona::phi_pullback_closed;
use crate::error::{Error, Result};
use crate::json_int;
use crate::lattice::{canonical_class, fiber_class, LatticeVector, RANK};
use crate::snf::{rank_of, smith_normal_form, IntegerMatrix};

/// The hypersurface `T ⊂ P^1 x P^n` of bidegree `(1, n+1)`, through its
/// Picard rank and canonical class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub n: u32,
    pub rho_t: usize,
    /// Canonical class of `T` in the chosen basis of `Pic T`.
    pub k_t: Vec<i64>,
}

impl SurfaceModel {
    /// For `n = 2`, `T` is again a rational elliptic surface and `Pic T` uses
    /// the blow-up basis `(h, e_1, ..., e_9)`. For `n >= 3` the basis is the
    /// restriction of the two rulings of `P^1 x P^n`, and adjunction gives
    /// `k_T = (-1, 0)`.
    pub fn new(n: u32) -> Result<Self> {
        match n {
            0 | 1 => Err(Error::arg(format!(
                "T needs n >= 2 for the Picard model, got n = {n}"
            ))),
            2 => Ok(SurfaceModel {
                n,
                rho_t: 10,
                k_t: vec![-3, 1, 1, 1, 1, 1, 1, 1, 1, 1],
            }),
            _ => Ok(SurfaceModel {
                n,
                rho_t: 2,
                k_t: vec![-1, 0],
            }),
        }
    }

    /// Rows of the ambient lattice `Pic S ⊕ Pic T`.
    pub fn ambient_rank(&self) -> usize {
        RANK + self.rho_t
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicPresentation {
    pub ambient_rank: usize,
    /// `(-k_S, k_T)`.
    pub relation: Vec<i64>,
    pub quotient_rank: usize,
}

/// `Pic X_12` as `Z^{10 + ρ_T}` modulo one relation.
pub fn pic_x12_presentation(model: &SurfaceModel) -> PicPresentation {
    let mut relation: Vec<i64> = canonical_class()
        .coords()
        .iter()
        .map(|c| -i64::try_from(c).expect("small"))
        .collect();
    relation.extend(&model.k_t);
    PicPresentation {
        ambient_rank: model.ambient_rank(),
        relation,
        quotient_rank: model.ambient_rank() - 1,
    }
}

/// The matrix of `R` together with labels for its rows and columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionMap {
    pub n: u32,
    pub m: u64,
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
    pub matrix: IntegerMatrix,
}

/// `3h + 3 phi_m^* h + (m - 2) k`, defined for every `m >= 0`.
fn gamma_center(m: u64) -> LatticeVector {
    let h3 = LatticeVector::h().scale_i64(3);
    let p3 = phi_pullback_closed(m).scale_i64(3);
    let k = canonical_class().scale(&(BigInt::from(m) - 2));
    &(&h3 + &p3) + &k
}

fn s_column(model: &SurfaceModel, v: &LatticeVector, sign: i64) -> Vec<BigInt> {
    let mut col: Vec<BigInt> = v.coords().iter().map(|c| c * sign).collect();
    col.resize(model.ambient_rank(), BigInt::zero());
    col
}

fn t_column(model: &SurfaceModel, g: usize, sign: i64) -> Vec<BigInt> {
    let mut col = vec![BigInt::zero(); model.ambient_rank()];
    col[RANK + g] = BigInt::from(sign);
    col
}

/// Columns, in order:
///
/// * `X_1`: `h`, the `ρ_T` generators of `Pic T`, `E_1..E_m`, `F`;
/// * `X_2`: `h`, the `ρ_T` generators of `Pic T`, all negated.
///
/// `E_j` restricts to the fiber class `f = -k`, `F` to `C_m`, and `h` on
/// `X_2` to `phi_m^* h` through the gluing. `m = 0` is allowed and simply
/// drops the `E_j` columns.
pub fn restriction_matrix(model: &SurfaceModel, m: u64) -> RestrictionMap {
    restriction_matrix_with(model, m, m)
}

fn restriction_matrix_with(model: &SurfaceModel, m: u64, e_columns: u64) -> RestrictionMap {
    let h = LatticeVector::h();
    let f = fiber_class();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();

    cols.push(s_column(model, &h, 1));
    labels.push("X1:h".into());
    for g in 0..model.rho_t {
        cols.push(t_column(model, g, 1));
        labels.push(format!("X1:T{}", g + 1));
    }
    for j in 1..=e_columns {
        cols.push(s_column(model, &f, 1));
        labels.push(format!("X1:E{j}"));
    }
    cols.push(s_column(model, &gamma_center(m), 1));
    labels.push("X1:F".into());

    cols.push(s_column(model, &phi_pullback_closed(m), -1));
    labels.push("X2:h".into());
    for g in 0..model.rho_t {
        cols.push(t_column(model, g, -1));
        labels.push(format!("X2:T{}", g + 1));
    }

    let mut row_labels = vec!["S:h".to_string()];
    row_labels.extend((1..=9).map(|i| format!("S:e{i}")));
    row_labels.extend((1..=model.rho_t).map(|g| format!("T:{g}")));

    RestrictionMap {
        n: model.n,
        m,
        row_labels,
        column_labels: labels,
        matrix: IntegerMatrix::from_columns(model.ambient_rank(), &cols).expect("column lengths"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiComputation {
    pub n: u32,
    pub m: u64,
    pub rho_t: usize,
    pub generators: usize,
    /// Rank of the image of `R` in `Pic X_12`.
    pub image_rank: usize,
    pub b2_x0: usize,
    pub b2_x: usize,
    /// Invariant factors of `R` with the relation column adjoined.
    pub invariants: Vec<Invariant>,
    pub matches_formula: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariant(#[serde(with = "json_int")] pub BigInt);

/// Ranks of `R` into the quotient `Pic X_12`, computed by Smith normal form.
///
/// The kernel of `[R | rel]` is computed, the coordinate attached to `rel`
/// is discarded, and the rank of what remains is `b_2(X_0)`.
pub fn betti_computation(model: &SurfaceModel, m: u64) -> BettiComputation {
    let map = restriction_matrix(model, m);
    betti_from_map(model, &map)
}

/// Same numbers as [`betti_computation`] without materialising `m` columns.
///
/// The `E_j` columns are identical, so `E_2..E_m` each add one kernel vector
/// `E_1 - E_j` independent of the rest and leave the invariant factors alone.
/// The matrix is built with a single `E` column and `m - 1` is added back.
pub fn betti_collapsed(model: &SurfaceModel, m: u64) -> BettiComputation {
    if m <= 1 {
        return betti_computation(model, m);
    }
    let map = restriction_matrix_with(model, m, 1);
    let mut b = betti_from_map(model, &map);
    let extra = usize::try_from(m - 1).expect("m fits in usize");
    b.generators += extra;
    b.b2_x0 += extra;
    b.b2_x += extra;
    b.matches_formula =
        b.b2_x0 as u64 == m + model.rho_t as u64 + 1 && b.image_rank == model.rho_t + 2;
    b
}

pub(crate) fn betti_from_map(model: &SurfaceModel, map: &RestrictionMap) -> BettiComputation {
    let pres = pic_x12_presentation(model);
    let rel: Vec<BigInt> = pres.relation.iter().map(|&x| BigInt::from(x)).collect();
    let rel_col = IntegerMatrix::from_columns(pres.ambient_rank, &[rel]).expect("relation length");
    let aug = map.matrix.hstack(&rel_col).expect("same rows");
    let snf = smith_normal_form(&aug);
    let generators = map.matrix.cols();

    let projected: Vec<Vec<BigInt>> = snf
        .kernel_basis()
        .into_iter()
        .map(|mut v| {
            v.truncate(generators);
            v
        })
        .collect();
    let b2_x0 = rank_of(generators, &projected).expect("kernel vectors have generator length");
    // the relation column is nonzero, so it contributes exactly one to the rank
    let image_rank = snf.rank - 1;
    let b2_x = b2_x0.saturating_sub(1);
    BettiComputation {
        n: model.n,
        m: map.m,
        rho_t: model.rho_t,
        generators,
        image_rank,
        b2_x0,
        b2_x,
        invariants: snf.invariants.into_iter().map(Invariant).collect(),
        matches_formula: b2_x0 as u64 == map.m + model.rho_t as u64 + 1
            && image_rank == model.rho_t + 2,
    }
}

pub fn b2_of_x0(model: &SurfaceModel, m: u64) -> Result<usize> {
    if m < 1 {
        return Err(Error::arg("b2 needs m >= 1"));
    }
    Ok(betti_computation(model, m).b2_x0)
}

pub fn b2_of_x(model: &SurfaceModel, m: u64) -> Result<usize> {
    Ok(b2_of_x0(model, m)? - 1)
}

/// The two sides of the d-semistability identity
/// `3(h + phi_m^* h) + 2f = m f + c_m` in `Pic S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DSemistability {
    pub m: u64,
    /// Normal bundle side, `3(h + phi_m^* h) + 2f`.
    pub normal_bundle_class: LatticeVector,
    /// Blow-up center side, `m f + c_m`.
    pub center_class: LatticeVector,
    pub holds: bool,
}

pub fn d_semistability_check(m: u64) -> Result<DSemistability> {
    let c_m = crate::curves::build_c(m)?;
    d_semistability_check_with(m, &c_m)
}

/// As [`d_semistability_check`] with a caller-supplied class for `c_m`.
pub fn d_semistability_check_with(m: u64, c_m: &LatticeVector) -> Result<DSemistability> {
    if m < 1 {
        return Err(Error::arg("d-semistability needs m >= 1"));
    }
    let f = fiber_class();
    let hp = &LatticeVector::h() + &phi_pullback_closed(m);
    let lhs = &hp.scale_i64(3) + &f.scale_i64(2);
    let rhs = &f.scale(&BigInt::from(m)) + c_m;
    Ok(DSemistability {
        m,
        holds: lhs == rhs,
        normal_bundle_class: lhs,
        center_class: rhs,
    })
}

/// Rank of `{h, phi_m^* h, k}` in `Z^10`; 3 means `[h]` and `[phi_m^* h]`
/// stay independent modulo `k`.
pub fn independence_rank(m: u64) -> usize {
    let vecs: Vec<Vec<BigInt>> = [LatticeVector::h(), phi_pullback_closed(m), canonical_class()]
        .into_iter()
        .map(|v| v.into_coords().to_vec())
        .collect();
    rank_of(RANK, &vecs).expect("length 10")
}

/// Outcome of matching a line bundle across the double locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingAnalysis {
    pub m: u64,
    #[serde(with = "json_int")]
    pub a: BigInt,
    #[serde(with = "json_int")]
    pub c: BigInt,
    #[serde(with = "json_int")]
    pub a_prime: BigInt,
    /// `(a + 3c) h + 3c phi_m^* h = a' phi_m^* h` holds modulo `k`.
    pub consistent: bool,
    /// `a >= 0` and `a' >= 0`.
    pub effective: bool,
    /// Generator `(a, c, a', λ)` of the solutions of
    /// `a h + c(3h + 3 phi_m^* h) - a' phi_m^* h = λ k`.
    pub solution_generator: Vec<Invariant>,
    /// The only effective solution `(a, a')`, when the effective solution set is a point.
    pub forced: Option<(Invariant, Invariant)>,
    /// Upper bound `N - 2` on the Iitaka dimension, as a formula in `N`.
    pub kodaira_bound: String,
}

/// Solves the matching condition for `L_1|_{D_1} = Ψ_m^* L_2|_{D_2}`
/// projected to `Pic S / Z k` and reports whether effectivity forces
/// `a = a' = 0`.
pub fn nonprojectivity_kernel(m: u64, a: &BigInt, c: &BigInt, a_prime: &BigInt) -> Result<MatchingAnalysis> {
    if m < 1 {
        return Err(Error::arg("the matching condition needs m >= 1"));
    }
    let h = LatticeVector::h();
    let p = phi_pullback_closed(m);
    let k = canonical_class();
    let gamma = &h.scale_i64(3) + &p.scale_i64(3);

    // is a h + c (3h + 3p) - a' p an integer multiple of k?
    let lhs = &(&h.scale(a) + &gamma.scale(c)) - &p.scale(a_prime);
    let consistent = multiple_of(&lhs, &k).is_some();

    let columns: Vec<Vec<BigInt>> = [h, gamma, -&p, -&k]
        .into_iter()
        .map(|v| v.into_coords().to_vec())
        .collect();
    let snf = smith_normal_form(&IntegerMatrix::from_columns(RANK, &columns)?);
    let kernel = snf.kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::Internal(format!(
            "matching system has kernel rank {}, expected 1",
            kernel.len()
        )));
    }
    let g = &kernel[0];
    let forced = forced_effective(&g[0], &g[2]);

    Ok(MatchingAnalysis {
        m,
        a: a.clone(),
        c: c.clone(),
        a_prime: a_prime.clone(),
        consistent,
        effective: !a.is_negative() && !a_prime.is_negative(),
        solution_generator: g.iter().cloned().map(Invariant).collect(),
        forced,
        kodaira_bound: "N-2".into(),
    })
}

/// `Some(λ)` with `v = λ k`.
fn multiple_of(v: &LatticeVector, k: &LatticeVector) -> Option<BigInt> {
    // k has h-coordinate -3 and unit e-coordinates
    let lambda = v.e_coeff(1).clone();
    (k.scale(&lambda) == *v).then_some(lambda)
}

/// Solutions are `t (g_a, g_a')`; effectivity asks `t g_a >= 0` and
/// `t g_a' >= 0`. The set of admissible `t` is `{0}` exactly when the two
/// entries have strictly opposite signs.
fn forced_effective(g_a: &BigInt, g_a_prime: &BigInt) -> Option<(Invariant, Invariant)> {
    let opposite = (g_a.is_positive() && g_a_prime.is_negative())
        || (g_a.is_negative() && g_a_prime.is_positive());
    opposite.then(|| (Invariant(BigInt::zero()), Invariant(BigInt::zero())))
}
