//! Exact computation of connected-component invariants for formal loops
//! into smooth affine curves.
//!
//! A loop into an affine curve `X` is a point of `X(ℚ((z)))`, given here by
//! truncated Laurent series for its coordinates. The crate computes
//!
//! * the unique factorization `α₀ z^ν ∏(1 − α₋ᵢ z^{−i}) ∏(1 − αⱼ z^j)` of
//!   invertible Laurent series over rings with nilpotents ([`ccnf`]),
//! * the component of a loop: the arc component, or a puncture of the proper
//!   model together with a pole order ([`curve`], [`classify`]),
//! * residues of meromorphic differentials along loops and at punctures,
//!   including third-kind differentials with residues `±1` ([`forms`]),
//! * the finite permutation-group count that separates covers of `X` from
//!   covers of its compactification ([`covers`]).
//!
//! All arithmetic is exact. Precision of truncated series is tracked
//! explicitly and an uncertifiable answer is an error, never a guess.

pub mod acceptance;
pub mod catalog;
pub mod ccnf;
pub mod classify;
pub mod covers;
pub mod curve;
mod error;
pub mod forms;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod ring;
pub mod series;
pub mod syntax;

pub use error::{Error, Result};

/// Arbitrary-precision rational numbers.
pub type Rat = num_rational::BigRational;

/// Default number of terms kept when an exact input produces an infinite
/// expansion (inverses, square roots, chart expansions).
pub const DEFAULT_TERMS: u32 = 24;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
