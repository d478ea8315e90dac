//! Exact lattice and topology computations for smoothed normal crossing
//! Calabi-Yau varieties built from a rational elliptic surface.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: the lattice `Z^{1,9}` with form `diag(1, -1, ..., -1)`.
//! * [`cremona`]: quadratic transformations as reflections, and the
//!   pullback `phi_m^* h` both by iteration and in closed form.
//! * [`curves`]: (-1)-class enumeration, the classes `L_m` and `C_m`, and
//!   Nakai–Moishezon certificates.
//! * [`snf`]: integer matrices and Smith normal form.
//! * [`smoothing`]: the Picard bookkeeping of the two-component normal
//!   crossing variety: restriction map, `b_2`, d-semistability, and the
//!   forced vanishing behind non-projectivity.
//! * [`topology`]: Euler numbers of all strata and of the smoothing.
//! * [`report`] and [`suite`]: the summary report and the verification run.
//!
//! ```
//! use nkcy::cremona::phi_pullback_closed;
//! use nkcy::lattice::degree;
//!
//! let p = phi_pullback_closed(1);
//! assert_eq!(p.to_string(), "28;-6,-6,-6,-9,-9,-9,-12,-12,-12");
//! assert_eq!(degree(&p), 3.into());
//! ```

pub mod cremona;
pub mod curves;
pub mod error;
pub mod json_int;
pub mod lattice;
pub mod report;
pub mod smoothing;
pub mod snf;
pub mod suite;
pub mod topology;

pub use error::{Error, Result};
pub use lattice::LatticeVector;

// The guide's snippets run as doctests, one module per chapter so a failure
// points at its chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/cremona.md")]
    mod cremona {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/smoothing.md")]
    mod smoothing {}
    #[doc = include_str!("../../../book/src/topology.md")]
    mod topology {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
