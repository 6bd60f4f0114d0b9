//! Scenario execution: trajectory, invariant checks, files, oracle and Magnus reports.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;
use std::time::Instant;

use phasespace_core::exec::{uniform_times, Exec};
use phasespace_core::fock::{default_steps, moments, wigner_from_rho, FockDensity, FockEvolution, GridSpec};
use phasespace_core::gaussian::wigner_value;
use phasespace_core::magnus::{
    magnus_a1_analytic, magnus_a1_numeric, magnus_a1_resonant, magnus_a2_analytic, magnus_a2_numeric, magnus_a3_numeric,
    A3_NODES, DEFAULT_NODES,
};
use phasespace_core::picture::{evolve, evolve_sp, glissette_residual, ip_centroid_circle, ip_centroid_radius_sq, trajectory, TrajectorySample};
use phasespace_core::{DriveSpec, GaussianState, LinearDrive, PhaseVector, PictureTag};
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::format::trajectory_csv;
use crate::svg::{render_frame, Frame, Reference};
use crate::CliError;

pub const PURITY_TOL: f64 = 1e-12;
pub const CIRCLE_TOL: f64 = 1e-10;
pub const GLISSETTE_TOL: f64 = 1e-10;
pub const LINE_TOL: f64 = 1e-12;
pub const STATIC_TOL: f64 = 1e-12;
pub const BREATHING_TOL: f64 = 1e-12;
pub const ORACLE_MOMENT_TOL: f64 = 1e-6;
pub const ORACLE_WIGNER_TOL: f64 = 1e-6;
pub const ORACLE_TAIL_TOL: f64 = 1e-8;
pub const MAGNUS_TOL: f64 = 1e-10;
pub const MAGNUS_A3_TOL: f64 = 1e-12;

/// Oracle Wigner grids: 64² points spanning the closed-form state ± 7σ.
const ORACLE_GRID_SIGMAS: f64 = 7.0;
const ORACLE_GRID_POINTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub trajectory_ms: f64,
    pub frames_ms: f64,
    pub oracle_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub picture: PictureTag,
    pub drive: DriveSpec,
    pub mu_x: f64,
    pub s: f64,
    pub t_max: f64,
    pub samples: usize,
    pub final_mean: [f64; 2],
    pub final_cov: [f64; 3],
    pub frames: Vec<String>,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    pub pass: bool,
}

impl RunSummary {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSample {
    pub t: f64,
    pub mean_delta: f64,
    pub cov_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerCheckpoint {
    pub t: f64,
    pub sup_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub cutoff: usize,
    pub steps: usize,
    pub max_mean_delta: f64,
    pub max_cov_delta: f64,
    pub max_wigner_delta: f64,
    pub max_tail: f64,
    pub samples: Vec<OracleSample>,
    pub checkpoints: Vec<WignerCheckpoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
}

impl OracleReport {
    pub fn checks(&self) -> Vec<CheckResult> {
        let mut c = vec![
            CheckResult::new("oracle_moments", self.max_mean_delta.max(self.max_cov_delta), ORACLE_MOMENT_TOL),
            CheckResult::new("oracle_wigner", self.max_wigner_delta, ORACLE_WIGNER_TOL),
            CheckResult::new("oracle_tail", self.max_tail, ORACLE_TAIL_TOL),
        ];
        if self.error.is_some() {
            c.iter_mut().for_each(|c| c.pass = false);
        }
        c
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn max_over<F: Fn(&TrajectorySample) -> f64>(traj: &[TrajectorySample], f: F) -> f64 {
    traj.iter().map(f).fold(0.0, f64::max)
}

fn checks(cfg: &ScenarioConfig, s0: &GaussianState, traj: &[TrajectorySample]) -> Result<Vec<CheckResult>, CliError> {
    let mut out = vec![CheckResult::new("purity", max_over(traj, |s| (s.state.det() - 0.25).abs()), PURITY_TOL)];
    let stationary = || CheckResult::new("static", max_over(traj, |s| s.state.max_abs_diff(s0)), STATIC_TOL);
    match (&cfg.drive, cfg.picture) {
        (_, PictureTag::HIP) => out.push(stationary()),
        (DriveSpec::Free { .. }, PictureTag::SP) => {
            let r0 = s0.mean.norm();
            out.push(CheckResult::new("centroid_circle", max_over(traj, |s| (s.state.mean.norm() - r0).abs()), CIRCLE_TOL));
        }
        (DriveSpec::Free { .. }, _) => out.push(stationary()),
        (DriveSpec::Linear(d), PictureTag::SP) if !d.is_resonant() => {
            let mut worst: f64 = 0.0;
            for s in traj {
                worst = worst.max(glissette_residual(s0, d, s.t)?);
            }
            out.push(CheckResult::new("glissette", worst, GLISSETTE_TOL));
        }
        (DriveSpec::Linear(_), PictureTag::SP) => {}
        (DriveSpec::Linear(d), _) if !d.is_resonant() => {
            let mut worst: f64 = 0.0;
            for s in traj {
                worst = worst.max(((s.state.mean - s0.mean).norm_sq() - ip_centroid_radius_sq(d, s.t)?).abs());
            }
            out.push(CheckResult::new("centroid_circle", worst, CIRCLE_TOL));
        }
        (DriveSpec::Linear(d), _) => {
            let dir = PhaseVector::new(-d.b, -d.a);
            let dir = dir.scale(1.0 / dir.norm().max(f64::MIN_POSITIVE));
            let v = max_over(traj, |s| {
                let delta = s.state.mean - s0.mean;
                (delta.x * dir.p - delta.p * dir.x).abs()
            });
            out.push(CheckResult::new("line", v, LINE_TOL));
        }
        (DriveSpec::Quadratic(_), PictureTag::SP) => {}
        (DriveSpec::Quadratic(q), _) => {
            let (xx, pp) = (s0.cov.xx(), s0.cov.pp());
            let v = max_over(traj, |s| {
                let k = (2.0 * q.kappa * s.t).exp();
                (s.state.cov.xx() - xx / k).abs().max((s.state.cov.pp() - pp * k).abs())
            });
            out.push(CheckResult::new("breathing", v, BREATHING_TOL));
        }
    }
    Ok(out)
}

fn references(cfg: &ScenarioConfig, s0: &GaussianState, traj: &[TrajectorySample]) -> Result<Vec<Reference>, CliError> {
    let origin = PhaseVector::new(0.0, 0.0);
    let path = || Reference::Curve(traj.iter().map(|s| s.state.mean).collect());
    Ok(match (&cfg.drive, cfg.picture) {
        (_, PictureTag::HIP) => vec![Reference::Ellipse(*s0)],
        (DriveSpec::Free { .. }, PictureTag::SP) => vec![Reference::Circle { center: origin, radius: s0.mean.norm() }],
        (DriveSpec::Free { .. }, _) => vec![Reference::Ellipse(*s0)],
        (DriveSpec::Linear(_), PictureTag::SP) => vec![path()],
        (DriveSpec::Linear(d), _) if !d.is_resonant() => {
            let (center, radius) = ip_centroid_circle(s0, d)?;
            vec![Reference::Circle { center, radius }]
        }
        (DriveSpec::Linear(_), _) => {
            let end = traj.last().map_or(s0.mean, |s| s.state.mean);
            vec![Reference::Line(s0.mean, end), Reference::Ellipse(*s0)]
        }
        (DriveSpec::Quadratic(_), _) => vec![Reference::Circle { center: origin, radius: 1.0 }],
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Runs a scenario; relative output paths resolve against `base`.
pub fn run_scenario(cfg: &ScenarioConfig, base: &Path) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let exec = Exec::default();
    let outputs = cfg.outputs.resolved(base);
    let s0 = cfg.initial_state()?;
    let times = uniform_times(cfg.time.t_max, cfg.time.samples);
    let traj = trajectory(&s0, &cfg.drive, cfg.picture, &times, exec)?;
    let mut checks = checks(cfg, &s0, &traj)?;
    let trajectory_ms = ms(start);

    if let Some(csv) = &outputs.csv {
        write(csv, &trajectory_csv(&traj))?;
    }

    let frames_start = Instant::now();
    let mut frames = Vec::new();
    if let Some(dir) = &outputs.svg_dir {
        let refs = references(cfg, &s0, &traj)?;
        for (k, t) in cfg.time.frame_times().into_iter().enumerate() {
            let state = evolve(&s0, &cfg.drive, cfg.picture, t)?;
            let mut trail: Vec<PhaseVector> = traj.iter().take_while(|s| s.t < t).map(|s| s.state.mean).collect();
            trail.push(state.mean);
            let name = format!("frame_{k:03}.svg");
            write(&dir.join(&name), &render_frame(&Frame { state: &state, trail: &trail, references: &refs }))?;
            frames.push(name);
        }
    }
    let frames_ms = ms(frames_start);

    let oracle_start = Instant::now();
    let oracle = if cfg.oracle.enabled { Some(oracle_report(cfg, &s0, &times)) } else { None };
    if let Some(r) = &oracle {
        checks.extend(r.checks());
    }
    let oracle_ms = ms(oracle_start);

    let last = traj.last().expect("at least two samples").state;
    let summary = RunSummary {
        picture: cfg.picture,
        drive: cfg.drive,
        mu_x: cfg.initial.mu_x,
        s: cfg.initial.s,
        t_max: cfg.time.t_max,
        samples: cfg.time.samples,
        final_mean: [last.mean.x, last.mean.p],
        final_cov: [last.cov.xx(), last.cov.xp(), last.cov.pp()],
        frames,
        pass: checks.iter().all(|c| c.pass),
        checks,
        oracle,
        timings: outputs.record_timings.then(|| Timings { trajectory_ms, frames_ms, oracle_ms, total_ms: ms(start) }),
    };
    if let Some(path) = &outputs.summary {
        write(path, &summary.to_json())?;
    }
    Ok(summary)
}

/// Propagates the truncated Fock oracle through the sample times (Schrödinger
/// picture) and compares moments and, at three checkpoints, Wigner fields.
pub fn oracle_report(cfg: &ScenarioConfig, s0: &GaussianState, times: &[f64]) -> OracleReport {
    let t_max = cfg.time.t_max;
    let steps = cfg.oracle.steps.unwrap_or_else(|| default_steps(&cfg.drive, t_max));
    let mut report = OracleReport {
        cutoff: cfg.oracle.cutoff,
        steps,
        max_mean_delta: 0.0,
        max_cov_delta: 0.0,
        max_wigner_delta: 0.0,
        max_tail: 0.0,
        samples: Vec::new(),
        checkpoints: Vec::new(),
        error: None,
        pass: false,
    };
    if let Err(e) = fill_oracle(cfg, s0, times, &mut report) {
        report.error = Some(e.to_string());
    }
    report.pass = report.error.is_none() && report.checks().iter().all(|c| c.pass);
    report
}

fn fill_oracle(cfg: &ScenarioConfig, s0: &GaussianState, times: &[f64], report: &mut OracleReport) -> Result<(), CliError> {
    let t_max = cfg.time.t_max;
    let rho0 = FockDensity::ideal_squeezed(cfg.initial.mu_x, cfg.initial.s, cfg.oracle.cutoff)?;
    let mut evo = FockEvolution::new(&rho0, &cfg.drive)?;
    let n = times.len();
    let checkpoints = [n / 3, 2 * n / 3, n - 1];
    for (k, &t) in times.iter().enumerate() {
        if t > evo.time() {
            let share = ((report.steps as f64) * (t - evo.time()) / t_max).ceil() as usize;
            let result = evo.advance(t, share.max(1));
            report.max_tail = evo.max_tail();
            result?;
        }
        let rho = evo.density();
        let closed = evolve_sp(s0, &cfg.drive, t)?;
        let (mean, cov) = moments(&rho)?;
        let sample = OracleSample { t, mean_delta: mean.max_abs_diff(closed.mean), cov_delta: cov.max_abs_diff(&closed.cov) };
        report.max_mean_delta = report.max_mean_delta.max(sample.mean_delta);
        report.max_cov_delta = report.max_cov_delta.max(sample.cov_delta);
        report.samples.push(sample);
        if checkpoints.contains(&k) && !report.checkpoints.iter().any(|c: &WignerCheckpoint| c.t == t) {
            let grid = GridSpec::around(&closed, ORACLE_GRID_SIGMAS, ORACLE_GRID_POINTS)?;
            let field = wigner_from_rho(&rho, &grid)?;
            let sup_delta = field.sup_diff(|x, p| wigner_value(&closed, PhaseVector::new(x, p)).unwrap_or(f64::NAN));
            report.max_wigner_delta = report.max_wigner_delta.max(sup_delta);
            report.checkpoints.push(WignerCheckpoint { t, sup_delta });
        }
    }
    report.max_tail = evo.max_tail();
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MagnusRow {
    pub t: f64,
    pub a1_analytic: [f64; 2],
    pub a1_numeric: [f64; 2],
    pub a1_delta: f64,
    pub a2_analytic: f64,
    pub a2_numeric: f64,
    pub a2_delta: f64,
    pub a3_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MagnusReport {
    pub rows: Vec<MagnusRow>,
    pub pass: bool,
}

impl MagnusReport {
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:>12} {:>24} {:>24} {:>9} {:>14} {:>14} {:>9} {:>9}\n",
            "t", "A1 analytic", "A1 numeric", "|dA1|", "A2 analytic", "A2 numeric", "|dA2|", "|A3|"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>12.6} {:>11.6}{:>+11.6}i {:>11.6}{:>+11.6}i {:>9.2e} {:>14.8} {:>14.8} {:>9.2e} {:>9.2e}\n",
                r.t,
                r.a1_analytic[0],
                r.a1_analytic[1],
                r.a1_numeric[0],
                r.a1_numeric[1],
                r.a1_delta,
                r.a2_analytic,
                r.a2_numeric,
                r.a2_delta,
                r.a3_residual
            ));
        }
        out
    }
}

/// Closed-form vs quadrature Magnus terms at t = k/8 · 2π/|Ω|, k = 1..8
/// (k/8 · t_max on resonance).
pub fn magnus_check(cfg: &ScenarioConfig) -> Result<MagnusReport, CliError> {
    let d: &LinearDrive = match &cfg.drive {
        DriveSpec::Linear(d) => d,
        _ => return Err(CliError::Config("magnus-check needs [drive] kind = \"linear\"".into())),
    };
    let span = if d.is_resonant() { cfg.time.t_max } else { TAU / d.omega().abs() };
    let mut rows = Vec::new();
    for k in 1..=8 {
        let t = span * k as f64 / 8.0;
        let (a1, a2) = if d.is_resonant() {
            (magnus_a1_resonant(d, t), 0.0)
        } else {
            (magnus_a1_analytic(d, t)?, magnus_a2_analytic(d, t)?)
        };
        let a1n = magnus_a1_numeric(d, t, DEFAULT_NODES)?;
        let a2n = magnus_a2_numeric(d, t, DEFAULT_NODES)?;
        rows.push(MagnusRow {
            t,
            a1_analytic: [a1.re, a1.im],
            a1_numeric: [a1n.re, a1n.im],
            a1_delta: (a1 - a1n).norm(),
            a2_analytic: a2,
            a2_numeric: a2n,
            a2_delta: (a2 - a2n).abs(),
            a3_residual: magnus_a3_numeric(d, t, A3_NODES)?,
        });
    }
    let pass = rows.iter().all(|r| r.a1_delta <= MAGNUS_TOL && r.a2_delta <= MAGNUS_TOL && r.a3_residual <= MAGNUS_A3_TOL);
    Ok(MagnusReport { rows, pass })
}
