//! Scenario configuration: strict TOML in, validated [`ScenarioConfig`] out.

use std::path::{Path, PathBuf};

use phasespace_core::gaussian::{ideal_squeezed, squeeze_for_sigma_x};
use phasespace_core::picture::{default_sample_count, default_t_max};
use phasespace_core::{DriveSpec, GaussianState, LinearDrive, PictureTag, QuadraticDrive};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_FRAMES: usize = 9;
pub const DEFAULT_ORACLE_CUTOFF: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialSpec {
    pub mu_x: f64,
    /// Real squeeze strength: σx² = e^{-2s}/2.
    pub s: f64,
}

impl InitialSpec {
    pub fn state(&self) -> Result<GaussianState, CliError> {
        Ok(ideal_squeezed(self.mu_x, self.s)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSpec {
    pub t_max: f64,
    pub samples: usize,
    /// Number of SVG frames, evenly spaced over [0, t_max].
    pub frames: usize,
}

impl TimeSpec {
    pub fn frame_times(&self) -> Vec<f64> {
        match self.frames {
            0 => Vec::new(),
            1 => vec![self.t_max],
            n => (0..n).map(|k| self.t_max * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
    pub svg_dir: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub record_timings: bool,
}

impl OutputSpec {
    /// Relative paths are taken relative to `base`.
    pub fn resolved(&self, base: &Path) -> OutputSpec {
        let join = |p: &Option<PathBuf>| p.as_ref().map(|p| if p.is_absolute() { p.clone() } else { base.join(p) });
        OutputSpec { csv: join(&self.csv), svg_dir: join(&self.svg_dir), summary: join(&self.summary), ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleSpec {
    pub enabled: bool,
    pub cutoff: usize,
    /// Total midpoint steps over [0, t_max]; `None` picks the default.
    pub steps: Option<usize>,
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self { enabled: false, cutoff: DEFAULT_ORACLE_CUTOFF, steps: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub picture: PictureTag,
    pub initial: InitialSpec,
    pub drive: DriveSpec,
    pub time: TimeSpec,
    pub outputs: OutputSpec,
    pub oracle: OracleSpec,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    picture: Option<String>,
    initial: RawInitial,
    drive: RawDrive,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    time: Option<RawTime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outputs: Option<RawOutputs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oracle: Option<RawOracle>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    mu_x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_x: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrive {
    kind: String,
    omega0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    #[serde(skip_serializing_if = "Option::is_none")]
    t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frames: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    svg_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    record_timings: Option<bool>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    #[serde(skip_serializing_if = "Option::is_none")]
    enabled: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<usize>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be finite, got {v}")))
    }
}

fn required(section: &str, kind: &str, name: &str, v: Option<f64>) -> Result<f64, CliError> {
    let v = v.ok_or_else(|| invalid(format!("[{section}] kind = \"{kind}\" requires `{name}`")))?;
    finite(name, v)
}

fn reject(kind: &str, fields: &[(&str, bool)]) -> Result<(), CliError> {
    match fields.iter().find(|(_, present)| *present) {
        Some((name, _)) => Err(invalid(format!("[drive] key `{name}` does not apply to kind = \"{kind}\""))),
        None => Ok(()),
    }
}

impl RawDrive {
    fn resolve(&self) -> Result<DriveSpec, CliError> {
        let w0 = finite("omega0", self.omega0)?;
        if w0 <= 0.0 {
            return Err(invalid(format!("omega0 must be positive, got {w0}")));
        }
        let kind = self.kind.as_str();
        let drive = match kind {
            "free" => {
                reject(
                    kind,
                    &[
                        ("g", self.g.is_some()),
                        ("a", self.a.is_some()),
                        ("b", self.b.is_some()),
                        ("omega1", self.omega1.is_some()),
                        ("kappa", self.kappa.is_some()),
                    ],
                )?;
                DriveSpec::free(w0)?
            }
            "linear" => {
                reject(kind, &[("kappa", self.kappa.is_some())])?;
                DriveSpec::Linear(LinearDrive::new(
                    w0,
                    required("drive", kind, "g", self.g)?,
                    required("drive", kind, "a", self.a)?,
                    required("drive", kind, "b", self.b)?,
                    required("drive", kind, "omega1", self.omega1)?,
                )?)
            }
            "quadratic" => {
                reject(
                    kind,
                    &[("g", self.g.is_some()), ("a", self.a.is_some()), ("b", self.b.is_some()), ("omega1", self.omega1.is_some())],
                )?;
                DriveSpec::Quadratic(QuadraticDrive::new(w0, required("drive", kind, "kappa", self.kappa)?)?)
            }
            other => return Err(invalid(format!("unknown drive kind {other:?} (expected free, linear or quadratic)"))),
        };
        Ok(drive)
    }

    fn from_spec(d: &DriveSpec) -> Self {
        match d {
            DriveSpec::Free { omega0 } => RawDrive { kind: "free".into(), omega0: *omega0, ..Default::default() },
            DriveSpec::Linear(l) => RawDrive {
                kind: "linear".into(),
                omega0: l.omega0,
                g: Some(l.g),
                a: Some(l.a),
                b: Some(l.b),
                omega1: Some(l.omega1),
                kappa: None,
            },
            DriveSpec::Quadratic(q) => {
                RawDrive { kind: "quadratic".into(), omega0: q.omega0, kappa: Some(q.kappa), ..Default::default() }
            }
        }
    }
}

impl RawConfig {
    fn resolve(self) -> Result<ScenarioConfig, CliError> {
        let picture: PictureTag = self.picture.as_deref().unwrap_or("SP").parse()?;

        let mu_x = finite("mu_x", self.initial.mu_x)?;
        let s = match (self.initial.s, self.initial.sigma_x) {
            (Some(_), Some(_)) => return Err(invalid("[initial] takes either `s` or `sigma_x`, not both")),
            (Some(s), None) => finite("s", s)?,
            (None, Some(sx)) => {
                if finite("sigma_x", sx)? <= 0.0 {
                    return Err(invalid(format!("sigma_x must be positive, got {sx}")));
                }
                squeeze_for_sigma_x(sx)
            }
            (None, None) => 0.0,
        };

        let drive = self.drive.resolve()?;

        let time = self.time.unwrap_or_default();
        let t_max = match time.t_max {
            Some(t) if finite("t_max", t)? > 0.0 => t,
            Some(t) => return Err(invalid(format!("t_max must be positive, got {t}"))),
            None => default_t_max(&drive),
        };
        let samples = time.samples.unwrap_or_else(|| default_sample_count(&drive, t_max));
        if samples < 2 {
            return Err(invalid(format!("samples must be at least 2, got {samples}")));
        }
        let frames = time.frames.unwrap_or(DEFAULT_FRAMES);

        let out = self.outputs.unwrap_or_default();
        let outputs = OutputSpec {
            csv: out.csv,
            svg_dir: out.svg_dir,
            summary: out.summary,
            record_timings: out.record_timings.unwrap_or(false),
        };

        let raw_oracle = self.oracle.unwrap_or_default();
        let oracle = OracleSpec {
            enabled: raw_oracle.enabled.unwrap_or(false),
            cutoff: raw_oracle.cutoff.unwrap_or(DEFAULT_ORACLE_CUTOFF),
            steps: raw_oracle.steps,
        };
        if oracle.cutoff < 8 {
            return Err(invalid(format!("oracle cutoff must be at least 8, got {}", oracle.cutoff)));
        }
        if oracle.steps == Some(0) {
            return Err(invalid("oracle steps must be positive"));
        }

        Ok(ScenarioConfig { picture, initial: InitialSpec { mu_x, s }, drive, time: TimeSpec { t_max, samples, frames }, outputs, oracle })
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| invalid(e.to_string()))?;
        raw.resolve()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Fully resolved form: every default written out, `s` instead of `sigma_x`.
    pub fn to_toml(&self) -> String {
        let o = &self.outputs;
        let raw = RawConfig {
            picture: Some(self.picture.as_str().to_string()),
            initial: RawInitial { mu_x: self.initial.mu_x, s: Some(self.initial.s), sigma_x: None },
            drive: RawDrive::from_spec(&self.drive),
            time: Some(RawTime { t_max: Some(self.time.t_max), samples: Some(self.time.samples), frames: Some(self.time.frames) }),
            outputs: Some(RawOutputs {
                csv: o.csv.clone(),
                svg_dir: o.svg_dir.clone(),
                summary: o.summary.clone(),
                record_timings: Some(o.record_timings),
            }),
            oracle: Some(RawOracle { enabled: Some(self.oracle.enabled), cutoff: Some(self.oracle.cutoff), steps: self.oracle.steps }),
        };
        toml::to_string(&raw).expect("scenario config serializes")
    }

    pub fn initial_state(&self) -> Result<GaussianState, CliError> {
        self.initial.state()
    }
}
