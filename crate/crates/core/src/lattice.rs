//! The odd unimodular lattice `Z^{1,9}`.
//!
//! Vectors are written in the basis `(h, e1, ..., e9)` where `h` is the
//! pullback of a line and the `e_i` are the exceptional classes of the nine
//! blown-up points. The form is `diag(1, -1, ..., -1)`:
//!
//! ```text
//! (a; b1..b9) . (a'; b1'..b9') = a a' - sum b_l b_l'
//! ```
//!
//! Every divisor class handled by the rest of the crate lives here. All
//! coordinates are arbitrary precision, so no computation can overflow.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json_int::{Exact, ExactVisitor};

/// Rank of the lattice.
pub const RANK: usize = 10;

/// An element of `Z^{1,9}`, coordinates `(a; b1, ..., b9)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    coords: [BigInt; RANK],
}

impl LatticeVector {
    pub fn from_coords(coords: [BigInt; RANK]) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64(coords: [i64; RANK]) -> Self {
        LatticeVector {
            coords: coords.map(BigInt::from),
        }
    }

    pub fn from_slice(coords: &[BigInt]) -> Result<Self> {
        let coords: [BigInt; RANK] = coords.to_vec().try_into().map_err(|v: Vec<BigInt>| {
            Error::arg(format!("expected {RANK} coordinates, got {}", v.len()))
        })?;
        Ok(LatticeVector { coords })
    }

    pub fn zero() -> Self {
        LatticeVector {
            coords: std::array::from_fn(|_| BigInt::zero()),
        }
    }

    /// The class `h` of a line.
    pub fn h() -> Self {
        let mut v = Self::zero();
        v.coords[0] = BigInt::one();
        v
    }

    /// The exceptional class `e_i`, `1 <= i <= 9`.
    pub fn e(i: usize) -> Result<Self> {
        if !(1..=9).contains(&i) {
            return Err(Error::arg(format!("exceptional index {i} not in 1..=9")));
        }
        let mut v = Self::zero();
        v.coords[i] = BigInt::one();
        Ok(v)
    }

    pub fn coords(&self) -> &[BigInt; RANK] {
        &self.coords
    }

    pub fn into_coords(self) -> [BigInt; RANK] {
        self.coords
    }

    /// Coefficient of `h`.
    pub fn h_coeff(&self) -> &BigInt {
        &self.coords[0]
    }

    /// Coefficient of `e_i`, `1 <= i <= 9`.
    pub fn e_coeff(&self, i: usize) -> &BigInt {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticeVector {
            coords: std::array::from_fn(|i| &self.coords[i] * k),
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }

    /// Self-intersection `x . x`.
    pub fn square(&self) -> BigInt {
        pairing(self, self)
    }
}

/// The intersection form `a a' - sum b_l b_l'`.
pub fn pairing(x: &LatticeVector, y: &LatticeVector) -> BigInt {
    let mut acc = &x.coords[0] * &y.coords[0];
    for l in 1..RANK {
        acc -= &x.coords[l] * &y.coords[l];
    }
    acc
}

/// The canonical class `k = -3h + e1 + ... + e9`.
pub fn canonical_class() -> LatticeVector {
    LatticeVector::from_i64([-3, 1, 1, 1, 1, 1, 1, 1, 1, 1])
}

/// The anticanonical (fiber) class `f = -k`.
pub fn fiber_class() -> LatticeVector {
    -canonical_class()
}

/// `f_i = e_{3i-2} + e_{3i-1} + e_{3i}` for `i` in `1..=3`.
pub fn triple_sum(i: usize) -> Result<LatticeVector> {
    if !(1..=3).contains(&i) {
        return Err(Error::arg(format!("triple index {i} not in 1..=3")));
    }
    let mut v = LatticeVector::zero();
    for j in 3 * i - 2..=3 * i {
        v.coords[j] = BigInt::one();
    }
    Ok(v)
}

/// Anticanonical degree `x . (-k)`.
pub fn degree(x: &LatticeVector) -> BigInt {
    // x . (3h - sum e) = 3a + sum b
    let mut acc = &x.coords[0] * 3;
    for l in 1..RANK {
        acc += &x.coords[l];
    }
    acc
}

/// Builds `a h - c1 f1 - c2 f2 - c3 f3`.
pub fn from_triple_form(a: BigInt, c: [BigInt; 3]) -> LatticeVector {
    let mut v = LatticeVector::zero();
    v.coords[0] = a;
    for (t, ct) in c.iter().enumerate() {
        for j in 3 * t + 1..=3 * t + 3 {
            v.coords[j] = -ct.clone();
        }
    }
    v
}

/// Reads `(a, [c1, c2, c3])` back from a vector of the form
/// `a h - c1 f1 - c2 f2 - c3 f3`, or `None` if the vector is not constant
/// on each block of three exceptional classes.
pub fn to_triple_form(v: &LatticeVector) -> Option<(BigInt, [BigInt; 3])> {
    let mut c: [BigInt; 3] = Default::default();
    for (t, ct) in c.iter_mut().enumerate() {
        let first = &v.coords[3 * t + 1];
        if v.coords[3 * t + 2] != *first || v.coords[3 * t + 3] != *first {
            return None;
        }
        *ct = -first.clone();
    }
    Some((v.coords[0].clone(), c))
}

impl Add<&LatticeVector> for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector {
            coords: std::array::from_fn(|i| &self.coords[i] + &rhs.coords[i]),
        }
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        &self + &rhs
    }
}

impl AddAssign<&LatticeVector> for LatticeVector {
    fn add_assign(&mut self, rhs: &LatticeVector) {
        for (a, b) in self.coords.iter_mut().zip(rhs.coords.iter()) {
            *a += b;
        }
    }
}

impl Sub<&LatticeVector> for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector {
            coords: std::array::from_fn(|i| &self.coords[i] - &rhs.coords[i]),
        }
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        &self - &rhs
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector {
            coords: self.coords.map(|c| -c),
        }
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        -self.clone()
    }
}

impl Mul<&LatticeVector> for &BigInt {
    type Output = LatticeVector;
    fn mul(self, rhs: &LatticeVector) -> LatticeVector {
        rhs.scale(self)
    }
}

impl Mul<&LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, rhs: &LatticeVector) -> LatticeVector {
        rhs.scale_i64(self)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeVector({self})")
    }
}

/// Compact text form `a;b1,b2,...,b9`.
impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.coords[0])?;
        for (i, c) in self.coords[1..].iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for LatticeVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected \"a;b1,...,b9\", got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
        };
        let mut coords = vec![parse(head)?];
        for t in tail.split(',') {
            coords.push(parse(t)?);
        }
        if coords.len() != RANK {
            return Err(Error::Parse(format!(
                "expected 1 + 9 coordinates, got {}",
                coords.len()
            )));
        }
        LatticeVector::from_slice(&coords)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(RANK))?;
        for c in &self.coords {
            seq.serialize_element(&Exact(c))?;
        }
        seq.end()
    }
}

struct ExactElem(BigInt);

impl<'de> Deserialize<'de> for ExactElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(ExactVisitor).map(ExactElem)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct VecVisitor;
        impl<'de> Visitor<'de> for VecVisitor {
            type Value = LatticeVector;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of 10 integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<LatticeVector, A::Error> {
                let mut coords = Vec::with_capacity(RANK);
                while let Some(ExactElem(c)) = seq.next_element()? {
                    coords.push(c);
                }
                LatticeVector::from_slice(&coords).map_err(de::Error::custom)
            }
        }
        d.deserialize_seq(VecVisitor)
    }
}
