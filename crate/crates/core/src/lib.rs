//! Driven quantum harmonic oscillator as Gaussian Wigner-function dynamics,
//! with a truncated Fock-space oracle for cross-checks.
//!
//! Units: ħ = 1, `x = (â + â†)/√2`, `p = (â - â†)/(i√2)`.

pub mod drive;
pub mod error;
pub mod exec;
pub mod fock;
pub mod gaussian;
pub mod magnus;
pub mod phase;
pub mod picture;
pub mod quadrature;

pub use drive::{DriveSpec, LinearDrive, PictureTag, QuadraticDrive};
pub use error::{Error, Result};
pub use exec::Exec;
pub use gaussian::{CovarianceMatrix, DisplacementSpec, GaussianState, SqueezeSpec};
pub use phase::{Mat2, PhaseVector, SymplecticMap};
