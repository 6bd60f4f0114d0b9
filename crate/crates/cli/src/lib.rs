//! Scenario runner for Gaussian phase-space dynamics.
//!
//! A scenario is a TOML file naming the initial squeezed state, the drive,
//! the picture and the time window. Running it produces a trajectory CSV,
//! SVG frames of the 1/e contour and a JSON summary of invariant checks.

pub mod config;
pub mod figures;
pub mod format;
pub mod run;
pub mod svg;

use std::path::{Path, PathBuf};

pub use config::ScenarioConfig;
pub use run::{magnus_check, oracle_report, run_scenario, MagnusReport, OracleReport, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] phasespace_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// Process exit status: 2 for usage and configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(phasespace_core::Error::InvalidParameter(_) | phasespace_core::Error::NonFinite(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}
