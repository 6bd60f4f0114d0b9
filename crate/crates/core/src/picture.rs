//! Closed-form Gaussian dynamics in the four pictures.
//!
//! Under `H0 = ω0(a†a + ½)` phase space rotates rigidly clockwise:
//! `r ↦ R(-ω0 t) r`. In the interaction picture the linear drive only
//! displaces the state and the quadratic drive only squeezes it; going
//! back to the Schrödinger picture re-applies the free rotation.
//!
//! Frame changes (`to_*_frame`) are passive maps of the coordinates; for a
//! Gaussian they act on the mean and covariance the same way an active
//! map does.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::drive::{DriveSpec, LinearDrive, PictureTag, QuadraticDrive};
use crate::error::Result;
use crate::exec::Exec;
use crate::gaussian::GaussianState;
use crate::phase::{rotation_matrix, Mat2, PhaseVector, SymplecticMap};

/// Default trajectory resolution: samples per 2π of the slowest frequency.
pub const SAMPLES_PER_PERIOD: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: GaussianState,
    pub picture: PictureTag,
}

/// Heisenberg-picture evolution of the quadrature operators:
/// `(x(t), p(t)) = M (x(0), p(0))` with `M = R(-ω0 t)`.
pub fn heisenberg_quadrature_map(omega0: f64, t: f64) -> Mat2 {
    rotation_matrix(-omega0 * t)
}

pub fn evolve_free_sp(s0: &GaussianState, omega0: f64, t: f64) -> GaussianState {
    map_state(s0, &SymplecticMap::rotation(-omega0 * t))
}

/// Passive rotation `r' = R(ω0 t) r` into the frame co-rotating with H0.
pub fn to_hp_frame(s_sp: &GaussianState, omega0: f64, t: f64) -> GaussianState {
    map_state(s_sp, &SymplecticMap::rotation(omega0 * t))
}

/// Same passive rotation as [`to_hp_frame`]; applied to a driven state it
/// strips the free evolution and leaves the interaction-picture state.
pub fn to_sip_frame(s_sp: &GaussianState, omega0: f64, t: f64) -> GaussianState {
    to_hp_frame(s_sp, omega0, t)
}

/// `(a, -b)`: the phase-space direction of √2·α*.
fn drive_vector(d: &LinearDrive) -> PhaseVector {
    PhaseVector::new(d.a, -d.b)
}

/// IP mean displacement `(g/Ω)(I - R(Ωt))(a, -b)` for Ω ≠ 0.
pub fn ip_drive_shift(d: &LinearDrive, t: f64) -> Result<PhaseVector> {
    let omega = d.nonresonant_omega()?;
    let c = drive_vector(d).scale(d.g / omega);
    Ok(c - rotation_matrix(omega * t).apply(c))
}

/// The Ω → 0 limit of [`ip_drive_shift`]: `(-g b t, -g a t)`.
pub fn resonant_drive_shift(d: &LinearDrive, t: f64) -> PhaseVector {
    PhaseVector::new(-d.g * d.b * t, -d.g * d.a * t)
}

/// IP mean displacement, switching to the resonant limit below threshold.
pub fn linear_drive_shift(d: &LinearDrive, t: f64) -> PhaseVector {
    if d.is_resonant() {
        resonant_drive_shift(d, t)
    } else {
        // cannot fail off resonance
        ip_drive_shift(d, t).unwrap_or_else(|_| resonant_drive_shift(d, t))
    }
}

pub fn evolve_linear_ip(s0: &GaussianState, d: &LinearDrive, t: f64) -> Result<GaussianState> {
    let shift = ip_drive_shift(d, t)?;
    Ok(GaussianState { mean: s0.mean + shift, cov: s0.cov })
}

/// Evaluates the Ω = 0 line law regardless of the drive's actual Ω.
pub fn evolve_linear_ip_resonant(s0: &GaussianState, d: &LinearDrive, t: f64) -> GaussianState {
    GaussianState { mean: s0.mean + resonant_drive_shift(d, t), cov: s0.cov }
}

/// Squared distance of the IP centroid from its starting point:
/// `2(g/Ω)²(a² + b²)(1 - cos Ωt)`.
pub fn ip_centroid_radius_sq(d: &LinearDrive, t: f64) -> Result<f64> {
    let omega = d.nonresonant_omega()?;
    let ratio = d.g / omega;
    let half = (0.5 * omega * t).sin();
    // 1 - cos θ = 2 sin²(θ/2)
    Ok(4.0 * ratio * ratio * (d.a * d.a + d.b * d.b) * half * half)
}

/// Center and radius of the circle traced by the IP centroid.
pub fn ip_centroid_circle(s0: &GaussianState, d: &LinearDrive) -> Result<(PhaseVector, f64)> {
    let omega = d.nonresonant_omega()?;
    let c = drive_vector(d).scale(d.g / omega);
    Ok((s0.mean + c, c.norm()))
}

pub fn evolve_linear_sp(s0: &GaussianState, d: &LinearDrive, t: f64) -> Result<GaussianState> {
    let omega = d.nonresonant_omega()?;
    let back = rotation_matrix(-d.omega0 * t);
    let c = drive_vector(d).scale(d.g / omega);
    let mean = back.apply(s0.mean) + back.apply(c) - rotation_matrix(d.omega1 * t).apply(c);
    let free = evolve_free_sp(s0, d.omega0, t);
    Ok(GaussianState { mean, cov: free.cov })
}

/// Deviation of the SP centroid from the glissette law
/// `|μ_S(t) - R(-ω0 t) μ0|² = 2(g/Ω)²(a² + b²)(1 - cos Ωt)`.
pub fn glissette_residual(s0: &GaussianState, d: &LinearDrive, t: f64) -> Result<f64> {
    let sp = evolve_linear_sp(s0, d, t)?;
    let generator = rotation_matrix(-d.omega0 * t).apply(s0.mean);
    let lhs = (sp.mean - generator).norm_sq();
    Ok((lhs - ip_centroid_radius_sq(d, t)?).abs())
}

/// `diag(e^{-κt}, e^{κt})`: the phase-space action of the IP squeeze.
pub fn quadratic_ip_map(q: &QuadraticDrive, t: f64) -> SymplecticMap {
    SymplecticMap::squeeze(q.kappa * t)
}

pub fn evolve_quadratic_ip(s0: &GaussianState, q: &QuadraticDrive, t: f64) -> GaussianState {
    map_state(s0, &quadratic_ip_map(q, t))
}

pub fn evolve_quadratic_sp(s0: &GaussianState, q: &QuadraticDrive, t: f64) -> GaussianState {
    let map = SymplecticMap::rotation(-q.omega0 * t).after(&quadratic_ip_map(q, t));
    map_state(s0, &map)
}

/// Passive map `r'' = R(ω0 t) r - (g/Ω)(a,-b) + (g/Ω) R(Ωt)(a,-b)` into the
/// frame where the linearly driven Wigner function is static.
pub fn to_hip_frame(s_sp: &GaussianState, d: &LinearDrive, t: f64) -> GaussianState {
    let map = SymplecticMap { matrix: rotation_matrix(d.omega0 * t), shift: -linear_drive_shift(d, t) };
    map_state(s_sp, &map)
}

/// Quadratic-drive counterpart of [`to_hip_frame`]: undo the free rotation,
/// then the IP squeeze.
pub fn to_hip_frame_quadratic(s_sp: &GaussianState, q: &QuadraticDrive, t: f64) -> GaussianState {
    let map = SymplecticMap::squeeze(-q.kappa * t).after(&SymplecticMap::rotation(q.omega0 * t));
    map_state(s_sp, &map)
}

/// Schrödinger-picture state for any drive; Ω = 0 uses the resonant limit.
pub fn evolve_sp(s0: &GaussianState, drive: &DriveSpec, t: f64) -> Result<GaussianState> {
    match drive {
        DriveSpec::Free { omega0 } => Ok(evolve_free_sp(s0, *omega0, t)),
        DriveSpec::Linear(d) if d.is_resonant() => {
            let ip = evolve_linear_ip_resonant(s0, d, t);
            Ok(evolve_free_sp(&ip, d.omega0, t))
        }
        DriveSpec::Linear(d) => evolve_linear_sp(s0, d, t),
        DriveSpec::Quadratic(q) => Ok(evolve_quadratic_sp(s0, q, t)),
    }
}

/// State at time `t` as seen in `picture`.
///
/// HP applies only the passive H0 rotation, so for a driven oscillator it
/// coincides with SIP. HIP removes the whole evolution and is static.
pub fn evolve(s0: &GaussianState, drive: &DriveSpec, picture: PictureTag, t: f64) -> Result<GaussianState> {
    match picture {
        PictureTag::SP => evolve_sp(s0, drive, t),
        PictureTag::HP => Ok(to_hp_frame(&evolve_sp(s0, drive, t)?, drive.omega0(), t)),
        PictureTag::SIP => match drive {
            DriveSpec::Free { .. } => Ok(*s0),
            DriveSpec::Linear(d) if d.is_resonant() => Ok(evolve_linear_ip_resonant(s0, d, t)),
            DriveSpec::Linear(d) => evolve_linear_ip(s0, d, t),
            DriveSpec::Quadratic(q) => Ok(evolve_quadratic_ip(s0, q, t)),
        },
        PictureTag::HIP => {
            let sp = evolve_sp(s0, drive, t)?;
            Ok(match drive {
                DriveSpec::Free { omega0 } => to_hp_frame(&sp, *omega0, t),
                DriveSpec::Linear(d) => to_hip_frame(&sp, d, t),
                DriveSpec::Quadratic(q) => to_hip_frame_quadratic(&sp, q, t),
            })
        }
    }
}

pub fn trajectory(
    s0: &GaussianState,
    drive: &DriveSpec,
    picture: PictureTag,
    times: &[f64],
    exec: Exec,
) -> Result<Vec<TrajectorySample>> {
    exec.try_map(times, |&t| evolve(s0, drive, picture, t).map(|state| TrajectorySample { t, state, picture }))
}

/// One period of the slowest frequency in the drive.
pub fn default_t_max(drive: &DriveSpec) -> f64 {
    TAU / drive.slowest_frequency()
}

/// [`SAMPLES_PER_PERIOD`] points per 2π of the slowest frequency, at least 2.
pub fn default_sample_count(drive: &DriveSpec, t_max: f64) -> usize {
    let periods = t_max * drive.slowest_frequency() / TAU;
    ((SAMPLES_PER_PERIOD as f64 * periods).ceil() as usize).max(2)
}

/// Rigid maps keep Σ positive definite; skip re-validation.
fn map_state(s: &GaussianState, map: &SymplecticMap) -> GaussianState {
    GaussianState { mean: map.apply(s.mean), cov: s.cov.transformed_unchecked(map.matrix) }
}
