//! Exact computations on the Hilbert square `X = S^[2]` of a generic K3
//! surface of degree `2t`.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: big rationals, the quadratic ring `Z[√d]`, exact linear algebra.
//! * [`pell`]: Pell, negative Pell and Pell-type equations with their
//!   equivalence classes.
//! * [`picard`]: the rank-two Néron–Severi lattice `Zh ⊕ Zδ`, its cones and
//!   the anti-symplectic involution.
//! * [`cohomology`]: the Hodge pieces of `H⁴` and `H⁶`.
//! * [`fixedlocus`]: the class of the fixed surface of the involution.
//! * [`irreducibility`]: the Diophantine search for invariant decompositions
//!   of `D₁ ∩ D₂`.
//! * [`report`], [`survey`], [`checks`]: per-degree reports, range surveys and
//!   the invariant suite driven by the `hilbsq` binary.
//!
//! No floating point is used anywhere.

pub mod arith;
pub mod checks;
pub mod cli;
pub mod cohomology;
mod error;
pub mod fixedlocus;
pub mod irreducibility;
pub mod par;
pub mod pell;
pub mod picard;
pub mod report;
pub mod serde_exact;
pub mod survey;

pub use error::{Error, Result};
