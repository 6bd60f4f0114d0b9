//! Built-in scenarios reproducing the seven reference figures.

use std::f64::consts::{LN_2, TAU};
use std::path::Path;

use phasespace_core::picture::default_sample_count;
use phasespace_core::{DriveSpec, LinearDrive, PictureTag, QuadraticDrive};

use crate::config::{InitialSpec, OracleSpec, OutputSpec, ScenarioConfig, TimeSpec};
use crate::run::{run_scenario, RunSummary};
use crate::CliError;

/// σx = 1, σp = 1/2.
pub const FIGURE_SQUEEZE: f64 = -LN_2 / 2.0;

/// Drive frequencies of the nine glissette panels.
pub const GLISSETTE_OMEGA1: [f64; 9] = [1.0 / 3.0, 2.0 / 3.0, 3.0 / 5.0, 3.0, 4.0, 33.0 / 7.0, 5.0, 34.0 / 5.0, 9.0];

pub struct FigureScenario {
    /// Output directory relative to the figures root.
    pub dir: String,
    pub config: ScenarioConfig,
}

fn scenario(dir: String, picture: PictureTag, mu_x: f64, drive: DriveSpec, t_max: f64, frames: usize) -> FigureScenario {
    let config = ScenarioConfig {
        picture,
        initial: InitialSpec { mu_x, s: FIGURE_SQUEEZE },
        drive,
        time: TimeSpec { t_max, samples: default_sample_count(&drive, t_max), frames },
        outputs: OutputSpec {
            csv: Some("trajectory.csv".into()),
            svg_dir: Some("frames".into()),
            summary: Some("summary.json".into()),
            record_timings: false,
        },
        oracle: OracleSpec::default(),
    };
    FigureScenario { dir, config }
}

fn linear(omega1: f64) -> DriveSpec {
    DriveSpec::Linear(LinearDrive::new(1.0, 5.0, 1.0, -1.0, omega1).expect("figure drive is valid"))
}

pub fn figure_scenarios() -> Vec<FigureScenario> {
    let free = DriveSpec::free(1.0).expect("ω0 = 1 is valid");
    let quadratic = DriveSpec::Quadratic(QuadraticDrive::new(1.0, 0.1).expect("figure drive is valid"));
    let mut out = vec![
        scenario("fig1".into(), PictureTag::SP, 4.0, free, TAU, 9),
        scenario("fig2".into(), PictureTag::SIP, -2.0, linear(2.0), TAU / 3.0, 9),
    ];
    for (k, w1) in GLISSETTE_OMEGA1.iter().enumerate() {
        out.push(scenario(format!("fig3/panel_{}", k + 1), PictureTag::SP, -2.0, linear(*w1), TAU, 1));
    }
    out.extend([
        scenario("fig4".into(), PictureTag::SP, -2.0, linear(2.0), TAU, 9),
        scenario("fig5".into(), PictureTag::SIP, -2.0, linear(-1.0), 1.0, 5),
        scenario("fig6".into(), PictureTag::SIP, 0.0, quadratic, TAU, 9),
        scenario("fig7".into(), PictureTag::SP, 0.0, quadratic, TAU, 9),
    ]);
    out
}

/// Writes each scenario's config next to its outputs and runs it.
pub fn emit_figures(root: &Path) -> Result<Vec<(String, RunSummary)>, CliError> {
    let mut out = Vec::new();
    for fig in figure_scenarios() {
        let dir = root.join(&fig.dir);
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let cfg_path = dir.join("config.toml");
        std::fs::write(&cfg_path, fig.config.to_toml()).map_err(|e| CliError::io(&cfg_path, e))?;
        out.push((fig.dir, run_scenario(&fig.config, &dir)?));
    }
    Ok(out)
}
