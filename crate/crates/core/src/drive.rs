//! Hamiltonian selection: free oscillator, linear drive, quadratic drive.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative resonance threshold: |Ω| below `RESONANCE_EPS · ω0` counts as Ω = 0.
pub const RESONANCE_EPS: f64 = 1e-9;

/// `V(t) = g (e^{-iω1 t} α â + e^{iω1 t} α* â†)` with α = (a + ib)/√2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearDrive {
    pub omega0: f64,
    pub g: f64,
    pub a: f64,
    pub b: f64,
    pub omega1: f64,
}

impl LinearDrive {
    pub fn new(omega0: f64, g: f64, a: f64, b: f64, omega1: f64) -> Result<Self> {
        let d = Self { omega0, g, a, b, omega1 };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        check_omega0(self.omega0)?;
        if ![self.g, self.a, self.b, self.omega1].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("linear drive"));
        }
        Ok(())
    }

    /// Ω = ω0 + ω1, the interaction-picture drive frequency.
    pub fn omega(&self) -> f64 {
        self.omega0 + self.omega1
    }

    pub fn alpha(&self) -> C64 {
        C64::new(self.a, self.b) / 2f64.sqrt()
    }

    pub fn resonance_threshold(&self) -> f64 {
        RESONANCE_EPS * self.omega0
    }

    pub fn is_resonant(&self) -> bool {
        self.omega().abs() < self.resonance_threshold()
    }

    /// Ω, or a resonance error when it is too small to divide by.
    pub fn nonresonant_omega(&self) -> Result<f64> {
        let omega = self.omega();
        let threshold = self.resonance_threshold();
        if omega.abs() < threshold {
            Err(Error::Resonant { omega, threshold })
        } else {
            Ok(omega)
        }
    }

    /// Same drive with the coupling switched off.
    pub fn without_coupling(&self) -> Self {
        Self { g: 0.0, ..*self }
    }
}

/// `V(t) = iκ (e^{2iω0 t} K̂₋ - e^{-2iω0 t} K̂₊)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticDrive {
    pub omega0: f64,
    pub kappa: f64,
}

impl QuadraticDrive {
    pub fn new(omega0: f64, kappa: f64) -> Result<Self> {
        check_omega0(omega0)?;
        if !kappa.is_finite() {
            return Err(Error::NonFinite("kappa"));
        }
        Ok(Self { omega0, kappa })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DriveSpec {
    Free { omega0: f64 },
    Linear(LinearDrive),
    Quadratic(QuadraticDrive),
}

impl DriveSpec {
    pub fn free(omega0: f64) -> Result<Self> {
        check_omega0(omega0)?;
        Ok(Self::Free { omega0 })
    }

    pub fn omega0(&self) -> f64 {
        match self {
            DriveSpec::Free { omega0 } => *omega0,
            DriveSpec::Linear(d) => d.omega0,
            DriveSpec::Quadratic(d) => d.omega0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DriveSpec::Free { omega0 } => check_omega0(*omega0),
            DriveSpec::Linear(d) => d.validate(),
            DriveSpec::Quadratic(d) => QuadraticDrive::new(d.omega0, d.kappa).map(|_| ()),
        }
    }

    /// Angular frequencies that shape the trajectory (zero ones dropped).
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f = vec![self.omega0()];
        if let DriveSpec::Linear(d) = self {
            f.push(d.omega1.abs());
            if !d.is_resonant() {
                f.push(d.omega().abs());
            }
        }
        f.retain(|w| *w > 0.0);
        f
    }

    pub fn slowest_frequency(&self) -> f64 {
        self.frequencies().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn fastest_frequency(&self) -> f64 {
        self.frequencies().into_iter().fold(0.0, f64::max)
    }
}

fn check_omega0(omega0: f64) -> Result<()> {
    if !omega0.is_finite() {
        return Err(Error::NonFinite("omega0"));
    }
    if omega0 <= 0.0 {
        return Err(Error::InvalidParameter(format!("omega0 must be positive, got {omega0}")));
    }
    Ok(())
}

/// Schrödinger, Heisenberg, Schrödinger-interaction, Heisenberg-interaction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PictureTag {
    SP,
    HP,
    SIP,
    HIP,
}

impl PictureTag {
    pub const ALL: [PictureTag; 4] = [PictureTag::SP, PictureTag::HP, PictureTag::SIP, PictureTag::HIP];

    pub fn as_str(&self) -> &'static str {
        match self {
            PictureTag::SP => "SP",
            PictureTag::HP => "HP",
            PictureTag::SIP => "SIP",
            PictureTag::HIP => "HIP",
        }
    }
}

impl std::fmt::Display for PictureTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PictureTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SP" => Ok(PictureTag::SP),
            "HP" => Ok(PictureTag::HP),
            "SIP" => Ok(PictureTag::SIP),
            "HIP" => Ok(PictureTag::HIP),
            other => Err(Error::InvalidParameter(format!("unknown picture {other:?} (expected SP, HP, SIP or HIP)"))),
        }
    }
}
