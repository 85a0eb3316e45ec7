//! Weighted Besov spaces of holomorphic functions on the unit ball of C^n,
//! made computable at desk scale.
//!
//! The crate provides:
//!
//! - sparse truncated holomorphic series in multi-index form ([`series`]),
//! - the fractional differential `D^alpha` and the radial derivative `R`
//!   ([`calculus`]),
//! - the regular-variation weight class used in the norms ([`weights`]),
//! - quadrature over the unit ball and sphere with exact monomial oracles
//!   ([`quadrature`]),
//! - weighted Besov, Bloch-type, and sup norms ([`norms`]),
//! - the Bergman-type integral operator `T` and the multiplier `M_h`
//!   ([`operators`]),
//! - checkers that certify the inequalities and identities the library is
//!   built around, with machine-readable reports ([`validation`]).
//!
//! Everything is deterministic: random sampling is seeded, parallel
//! reductions use a fixed order, and reports are byte-stable.

pub mod calculus;
pub mod error;
pub mod norms;
pub mod operators;
pub mod parallel;
pub mod quadrature;
pub mod series;
pub mod validation;
pub mod weights;

pub use error::{Error, Result};
pub use series::{BallPoint, HoloSeries, MultiIndex};
pub use weights::{WeightS, WeightStar};
