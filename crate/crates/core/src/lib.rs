//! Numerics for the scalar Gaussian channel `Y = sqrt(snr)·X + Z` under an
//! MMSE disturbance constraint.
//!
//! The crate evaluates the channel metrics (mutual information, MMSE, the
//! second moment of the conditional variance, Fisher information), the full
//! family of closed-form bounds on the constrained maximum MMSE and rate
//! (LMMSE, single-crossing envelope, the infinite-dimensional limits `M∞`/`C∞`,
//! the D-bound with and without the power refinement, the finite-`n` rate
//! corrections and additive-gap certificates), and the input constructions
//! that approach them (unit-power PAM, mixed discrete+Gaussian superpositions,
//! the heavy-atom `X_a` family, and published three-atom references), plus a
//! seeded local search over small discrete constellations.
//!
//! All expectations over the Gaussian noise are taken with a deterministic
//! Gauss–Hermite rule (see [`quad`]); every public computation is a pure
//! function of its arguments, so results are bit-reproducible across runs and
//! safe to evaluate concurrently.

pub mod bounds;
pub mod design;
pub mod error;
pub mod input;
pub mod metrics;
pub mod numeric;
pub mod quad;
pub mod search;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use input::{DiscreteInput, InputDistribution};
pub use quad::{build_grid, default_grid, GaussGrid, QuadKind, QuadratureSpec};
