use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("covariance is not positive definite (σxx = {xx}, det = {det})")]
    NotPositiveDefinite { xx: f64, det: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The general linear-drive formulas divide by Ω; below the threshold the
    /// resonant (Ω = 0) branch must be used instead.
    #[error("drive is resonant: |Ω| = {omega:e} is below the threshold {threshold:e}")]
    Resonant { omega: f64, threshold: f64 },

    #[error("quadrature needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("amplitude {amplitude:.4} exceeds the budget {budget:.4} for cutoff N = {cutoff}")]
    AmplitudeTooLarge { amplitude: f64, budget: f64, cutoff: usize },

    #[error("cutoff N = {cutoff} too small: population of the top {window} basis states is {tail_mass:e}")]
    CutoffTooSmall { cutoff: usize, window: usize, tail_mass: f64 },

    #[error("trace drifted to {trace} (allowed deviation {tolerance:e})")]
    TraceLeak { trace: f64, tolerance: f64 },

    #[error("phase-space window too small: {0}")]
    WindowTooSmall(String),
}
