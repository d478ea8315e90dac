//! Quadratic transformations acting on `Z^{1,9}` as reflections.
//!
//! The quadratic transformation based at three of the nine points pulls
//! classes back by the reflection in `alpha_ijk = h - e_i - e_j - e_k`:
//!
//! ```text
//! x  |->  x + (x . alpha) alpha
//! ```
//!
//! The construction composes these in blocks. One *psi step* reflects in
//! `alpha_123`, then `alpha_456`, then `alpha_789`; the map `phi_m` is `2m`
//! psi steps. Its pullback of `h` has a closed form which
//! [`phi_pullback_closed`] evaluates directly and [`phi_pullback_iterative`]
//! reproduces by brute composition.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{from_triple_form, pairing, LatticeVector};

/// A root `h - e_i - e_j - e_k` with `1 <= i < j < k <= 9`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    indices: [usize; 3],
    vector: LatticeVector,
}

impl Root {
    /// Accepts the three indices in any order; they must be distinct and in `1..=9`.
    pub fn new(i: usize, j: usize, k: usize) -> Result<Self> {
        let mut indices = [i, j, k];
        indices.sort_unstable();
        if indices.iter().any(|&t| !(1..=9).contains(&t)) {
            return Err(Error::arg(format!("root indices {i},{j},{k} not in 1..=9")));
        }
        if indices[0] == indices[1] || indices[1] == indices[2] {
            return Err(Error::arg(format!("root indices {i},{j},{k} not distinct")));
        }
        let mut coords = [0i64; 10];
        coords[0] = 1;
        for &t in &indices {
            coords[t] = -1;
        }
        Ok(Root {
            indices,
            vector: LatticeVector::from_i64(coords),
        })
    }

    pub fn indices(&self) -> [usize; 3] {
        self.indices
    }

    pub fn vector(&self) -> &LatticeVector {
        &self.vector
    }

    /// All 84 roots of this shape, in lexicographic order of indices.
    pub fn all() -> Vec<Root> {
        let mut out = Vec::with_capacity(84);
        for i in 1..=7 {
            for j in i + 1..=8 {
                for k in j + 1..=9 {
                    out.push(Root::new(i, j, k).expect("valid indices"));
                }
            }
        }
        out
    }
}

/// Pullback by the quadratic transformation at `r`: `x + (x . r) r`.
pub fn reflect(x: &LatticeVector, r: &Root) -> LatticeVector {
    // (x . alpha) = a + b_i + b_j + b_k for alpha = h - e_i - e_j - e_k
    let c = pairing(x, &r.vector);
    let mut coords = x.coords().clone();
    coords[0] += &c;
    for &t in &r.indices {
        coords[t] -= &c;
    }
    LatticeVector::from_coords(coords)
}

fn psi_roots() -> [Root; 3] {
    [
        Root::new(1, 2, 3).expect("valid"),
        Root::new(4, 5, 6).expect("valid"),
        Root::new(7, 8, 9).expect("valid"),
    ]
}

/// Reflects in `alpha_123`, then `alpha_456`, then `alpha_789`.
pub fn psi_step(x: &LatticeVector) -> LatticeVector {
    let roots = psi_roots();
    roots.iter().fold(x.clone(), |acc, r| reflect(&acc, r))
}

/// `phi_m^*(x)` by composing `2m` psi steps; `m = 0` is the identity.
pub fn phi_pullback_iterative(m: u64, x: &LatticeVector) -> LatticeVector {
    let mut acc = x.clone();
    for _ in 0..2 * m {
        acc = psi_step(&acc);
    }
    acc
}

/// The successive pullbacks `phi_0^*(x), phi_1^*(x), phi_2^*(x), ...`.
pub fn phi_pullback_sequence(x: &LatticeVector) -> impl Iterator<Item = LatticeVector> {
    std::iter::successors(Some(x.clone()), |v| Some(psi_step(&psi_step(v))))
}

/// `(27m^2+1) h - (9m^2-3m) f1 - 9m^2 f2 - (9m^2+3m) f3`.
pub fn phi_pullback_closed(m: u64) -> LatticeVector {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let nine_m2: BigInt = &m2 * 9;
    let three_m: BigInt = &m * 3;
    from_triple_form(
        &m2 * 27 + 1,
        [&nine_m2 - &three_m, nine_m2.clone(), &nine_m2 + &three_m],
    )
}

/// A composite of quadratic transformations, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CremonaWord {
    steps: Vec<Root>,
}

impl CremonaWord {
    pub fn new(steps: &[[usize; 3]]) -> Result<Self> {
        let steps = steps
            .iter()
            .map(|&[i, j, k]| Root::new(i, j, k))
            .collect::<Result<_>>()?;
        Ok(CremonaWord { steps })
    }

    pub fn from_roots(steps: Vec<Root>) -> Self {
        CremonaWord { steps }
    }

    /// The word for one psi step.
    pub fn psi() -> Self {
        CremonaWord {
            steps: psi_roots().to_vec(),
        }
    }

    /// The word for `phi_m`: `2m` copies of the psi step.
    pub fn phi(m: u64) -> Self {
        let psi = psi_roots();
        let steps = (0..2 * m).flat_map(|_| psi.iter().cloned()).collect();
        CremonaWord { steps }
    }

    pub fn steps(&self) -> &[Root] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reversed(&self) -> Self {
        CremonaWord {
            steps: self.steps.iter().rev().cloned().collect(),
        }
    }

    pub fn triples(&self) -> Vec<[usize; 3]> {
        self.steps.iter().map(Root::indices).collect()
    }
}

/// Folds [`reflect`] over the word's steps, left to right.
pub fn apply_word(w: &CremonaWord, x: &LatticeVector) -> LatticeVector {
    w.steps.iter().fold(x.clone(), |acc, r| reflect(&acc, r))
}

/// Text form `1,2,3;4,5,6`. The empty string is the empty word.
impl FromStr for CremonaWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(CremonaWord::default());
        }
        let mut triples = Vec::new();
        for part in s.split(';') {
            let idx = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad index {t:?} in word")))
                })
                .collect::<Result<Vec<_>>>()?;
            let triple: [usize; 3] = idx
                .try_into()
                .map_err(|_| Error::Parse(format!("step {part:?} is not a triple")))?;
            triples.push(triple);
        }
        CremonaWord::new(&triples)
    }
}

impl fmt::Display for CremonaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, r) in self.steps.iter().enumerate() {
            if n > 0 {
                f.write_str(";")?;
            }
            let [i, j, k] = r.indices;
            write!(f, "{i},{j},{k}")?;
        }
        Ok(())
    }
}

impl Serialize for CremonaWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.triples().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CremonaWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let triples = Vec::<[usize; 3]>::deserialize(d)?;
        CremonaWord::new(&triples).map_err(serde::de::Error::custom)
    }
}
