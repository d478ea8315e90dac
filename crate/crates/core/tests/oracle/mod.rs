//! Reference computations written against plain integers, sharing no code
//! with the library beyond converting results for comparison.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

pub type V = [i128; 10];

pub fn form(x: &V, y: &V) -> i128 {
    x[0] * y[0] - (1..10).map(|i| x[i] * y[i]).sum::<i128>()
}

pub fn h() -> V {
    let mut v = [0; 10];
    v[0] = 1;
    v
}

pub fn k() -> V {
    [-3, 1, 1, 1, 1, 1, 1, 1, 1, 1]
}

pub fn root(t: [usize; 3]) -> V {
    let mut r = h();
    for i in t {
        r[i] = -1;
    }
    r
}

pub fn reflect(x: &V, t: [usize; 3]) -> V {
    let r = root(t);
    let c = form(x, &r);
    let mut out = *x;
    for i in 0..10 {
        out[i] += c * r[i];
    }
    out
}

/// `phi_m^*` as 2m rounds of three reflections.
pub fn phi_iter(m: u64, x: &V) -> V {
    let mut v = *x;
    for _ in 0..2 * m {
        for t in [[1, 2, 3], [4, 5, 6], [7, 8, 9]] {
            v = reflect(&v, t);
        }
    }
    v
}

/// `a h - c1 f1 - c2 f2 - c3 f3` with `f_i` the sum over the i-th triple.
pub fn triple_form(a: i128, c: [i128; 3]) -> V {
    let mut v = [0; 10];
    v[0] = a;
    for (t, ct) in c.iter().enumerate() {
        for j in 0..3 {
            v[1 + 3 * t + j] = -ct;
        }
    }
    v
}

pub fn to_big(v: &V) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn from_big(v: &[BigInt]) -> V {
    let mut out = [0; 10];
    for (o, x) in out.iter_mut().zip(v) {
        *o = i128::try_from(x).expect("fits in i128");
    }
    out
}

fn multinomial_permutations(tuple: &[i64]) -> u64 {
    let mut fact = [1u64; 10];
    for i in 1..10 {
        fact[i] = fact[i - 1] * i as u64;
    }
    let mut counts = std::collections::BTreeMap::new();
    for &b in tuple {
        *counts.entry(b).or_insert(0usize) += 1;
    }
    counts.values().fold(fact[9], |acc, &c| acc / fact[c])
}

fn sorted_tuples(lo: i64, hi: i64, len: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    let start = prefix.last().copied().unwrap_or(lo);
    for b in start..=hi {
        prefix.push(b);
        sorted_tuples(lo, hi, len, prefix, out);
        prefix.pop();
    }
}

/// Number of `(alpha; beta)` with `alpha^2 - sum beta^2 = -1`, `3 alpha - sum beta = 1`,
/// counted over nondecreasing `beta` multisets in `[-1, alpha + 1]` and expanded by permutations.
pub fn count_minus_one(alpha: i64) -> u64 {
    let mut tuples = Vec::new();
    sorted_tuples(-1, alpha + 1, 9, &mut Vec::new(), &mut tuples);
    tuples
        .iter()
        .filter(|b| {
            alpha * alpha - b.iter().map(|x| x * x).sum::<i64>() == -1 && 3 * alpha - b.iter().sum::<i64>() == 1
        })
        .map(|b| multinomial_permutations(b))
        .sum()
}

/// Rank over the rationals by fraction-free row reduction.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (num, den) = (a[i][c].clone(), a[r][c].clone());
            for j in c..ncols {
                let v = &a[i][j] * &den - &a[r][j] * &num;
                a[i][j] = v;
            }
            let g = a[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in a[i].iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |s, t| s + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion along the first row. Exponential, so
/// only meant for the small matrices the property checks draw.
pub fn det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    assert!(n <= 8, "cofactor expansion on a {n}x{n} matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = a[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &a[0][j] * det(&minor);
        total += if j % 2 == 0 { term } else { -term };
    }
    total
}

/// Euler number of a smooth hypersurface of degree `n + 1` in `P^n`,
/// from the total Chern class `(1+H)^{n+1} / (1 + (n+1)H)`.
pub fn hypersurface_euler(n: u32) -> BigInt {
    let d = BigInt::from(n + 1);
    let mut total = BigInt::zero();
    // coefficient of H^{n-1}, times d = deg of the hypersurface
    for i in 0..n {
        let binom = binomial(n + 1, i);
        let pow: BigInt = Pow::pow(-&d, n - 1 - i);
        total += binom * pow;
    }
    total * d
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub struct EulerStrata {
    pub e_x1: BigInt,
    pub e_x2: BigInt,
    pub e_x12: BigInt,
    pub e_cm: BigInt,
}

/// Each stratum from its own formula: `sigma` from Chern classes, the node
/// count `(n+1) n^n` with sign `(-1)^n`, and `e(C_m)` from adjunction.
pub fn euler_strata(n: u32, m: u64) -> EulerStrata {
    let sigma = hypersurface_euler(n);
    let nodes = BigInt::from(n + 1) * Pow::pow(BigInt::from(n), n);
    let delta = if n % 2 == 0 { nodes } else { -nodes };
    let e_t = &sigma * 2 + &delta;
    let e_x2 = &e_t * 3;
    let e_cm = adjunction_euler(m);
    let e_gamma = &e_cm * &sigma + &delta * 18;
    EulerStrata {
        e_x1: &e_x2 + &e_gamma,
        e_x2,
        e_x12: &sigma * 12,
        e_cm,
    }
}

/// `-(K + C) . C` for `C = 3h + 3 phi_m^* h + (m - 2) k`, evaluated with the oracle form.
pub fn adjunction_euler(m: u64) -> BigInt {
    let p = phi_iter_closed(m);
    let kk = k();
    let mut c = [0i128; 10];
    for i in 0..10 {
        c[i] = 3 * h()[i] + 3 * p[i] + (m as i128 - 2) * kk[i];
    }
    let mut kc = c;
    for i in 0..10 {
        kc[i] += kk[i];
    }
    BigInt::from(-form(&kc, &c))
}

/// The closed form of `phi_m^* h` in triple form.
pub fn phi_iter_closed(m: u64) -> V {
    let m = m as i128;
    triple_form(27 * m * m + 1, [9 * m * m - 3 * m, 9 * m * m, 9 * m * m + 3 * m])
}
