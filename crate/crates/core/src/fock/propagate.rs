//! Time-ordered Schrödinger-picture propagation with midpoint step unitaries.
//!
//! Every supported `Ĥ(t)` has the form `P(φ(t)) H_fix P(φ(t))†` with
//! `P(φ) = diag(e^{iφn})` and `φ` linear in `t`, so one eigendecomposition of
//! `H_fix` serves every step: `e^{-iĤ(t_mid)Δt} = P(φ_mid) e^{-iH_fix Δt} P(φ_mid)†`.

use nalgebra::{DMatrix, Dyn, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::{ladder_ops, number_op, phase_exponential, su11_ops, FockDensity, FockOperator, Ket};
use crate::drive::{DriveSpec, QuadraticDrive};
use crate::error::{Error, Result};

/// Number of top basis states whose population is monitored.
pub const TAIL_WINDOW: usize = 5;
/// Largest accepted population in the monitored tail.
pub const TAIL_LIMIT: f64 = 1e-8;
const TRACE_LEAK_LIMIT: f64 = 1e-6;
const MIN_STEPS: usize = 500;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `ceil(2000 t max(ω0, |Ω|, κ) / 2π)`, at least 500.
pub fn default_steps(drive: &DriveSpec, t: f64) -> usize {
    let rate = match drive {
        DriveSpec::Free { omega0 } => *omega0,
        DriveSpec::Linear(d) => d.omega0.max(d.omega().abs()),
        DriveSpec::Quadratic(q) => q.omega0.max(q.kappa.abs()),
    };
    let steps = (2000.0 * t.abs() * rate / std::f64::consts::TAU).ceil();
    (steps as usize).max(MIN_STEPS)
}

fn free_part(omega0: f64, cutoff: usize) -> DMatrix<C64> {
    let dim = cutoff + 1;
    (number_op(cutoff).matrix + DMatrix::<C64>::identity(dim, dim) * C64::new(0.5, 0.0)) * C64::new(omega0, 0.0)
}

/// `Ĥ(t)` assembled from ladder operators:
/// free `ω0(n̂+½)`, linear `+ g(e^{-iω1t} α â + e^{iω1t} α* â†)`,
/// quadratic `+ (iκ/2)(e^{2iω0t} â² - e^{-2iω0t} â†²)`.
pub fn hamiltonian_at(drive: &DriveSpec, t: f64, cutoff: usize) -> Result<FockOperator> {
    let (a, ad) = ladder_ops(cutoff)?;
    let h0 = free_part(drive.omega0(), cutoff);
    let m = match drive {
        DriveSpec::Free { .. } => h0,
        DriveSpec::Linear(d) => {
            let alpha = d.alpha();
            let w = C64::from_polar(1.0, -d.omega1 * t);
            h0 + (a.matrix * (alpha * w) + ad.matrix * (alpha.conj() * w.conj())) * C64::new(d.g, 0.0)
        }
        DriveSpec::Quadratic(q) => {
            let w = C64::from_polar(1.0, 2.0 * q.omega0 * t);
            let a2 = &a.matrix * &a.matrix;
            let ad2 = &ad.matrix * &ad.matrix;
            h0 + (a2 * w - ad2 * w.conj()) * (I * (q.kappa / 2.0))
        }
    };
    FockOperator::new(m)
}

/// `2ω0 K̂0 + iκ(e^{2iω0t} K̂- - e^{-2iω0t} K̂+)`.
pub fn quadratic_hamiltonian_su11(q: &QuadraticDrive, t: f64, cutoff: usize) -> Result<FockOperator> {
    let (k0, kp, km) = su11_ops(cutoff)?;
    let w = C64::from_polar(1.0, 2.0 * q.omega0 * t);
    let drive = km.scale(w).add(&kp.scale(-w.conj())).scale(I * q.kappa);
    Ok(k0.scale(C64::new(2.0 * q.omega0, 0.0)).add(&drive))
}

/// Time-independent generator and frame angle `φ(t)` with `Ĥ(t) = P(φ) H_fix P(φ)†`.
fn rotating_form(drive: &DriveSpec, cutoff: usize) -> Result<(DMatrix<C64>, f64, f64)> {
    let (a, ad) = ladder_ops(cutoff)?;
    let h0 = free_part(drive.omega0(), cutoff);
    Ok(match drive {
        DriveSpec::Free { .. } => (h0, 0.0, 0.0),
        DriveSpec::Linear(d) => {
            let alpha = d.alpha();
            let h = h0 + (a.matrix + ad.matrix) * C64::new(d.g * alpha.norm(), 0.0);
            (h, d.omega1, -alpha.arg())
        }
        DriveSpec::Quadratic(q) => {
            let a2 = &a.matrix * &a.matrix;
            let ad2 = &ad.matrix * &ad.matrix;
            (h0 + (a2 - ad2) * (I * (q.kappa / 2.0)), -q.omega0, 0.0)
        }
    })
}

fn rotate_ket(ket: &mut Ket, phi: f64) {
    if phi == 0.0 {
        return;
    }
    for (n, z) in ket.iter_mut().enumerate() {
        *z *= C64::from_polar(1.0, phi * n as f64);
    }
}

/// Incremental propagation of the eigen-kets of an initial density matrix.
#[derive(Clone, Debug)]
pub struct FockEvolution {
    cutoff: usize,
    eig: SymmetricEigen<C64, Dyn>,
    phase_rate: f64,
    phase_offset: f64,
    kets: Vec<(f64, Ket)>,
    initial_trace: f64,
    time: f64,
    max_tail: f64,
}

impl FockEvolution {
    pub fn new(rho0: &FockDensity, drive: &DriveSpec) -> Result<Self> {
        drive.validate()?;
        let cutoff = rho0.cutoff();
        let (h, phase_rate, phase_offset) = rotating_form(drive, cutoff)?;
        let kets = rho0.kets();
        let initial_trace = kets.iter().map(|(w, k)| w * k.norm_squared()).sum();
        let mut evo = Self {
            cutoff,
            eig: SymmetricEigen::new(h),
            phase_rate,
            phase_offset,
            kets,
            initial_trace,
            time: 0.0,
            max_tail: 0.0,
        };
        evo.check_tail()?;
        Ok(evo)
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Largest tail population seen so far.
    pub fn max_tail(&self) -> f64 {
        self.max_tail
    }

    fn tail(&self) -> f64 {
        let dim = self.cutoff + 1;
        let lo = dim.saturating_sub(TAIL_WINDOW);
        self.kets.iter().map(|(w, k)| w * (lo..dim).map(|n| k[n].norm_sqr()).sum::<f64>()).sum()
    }

    fn check_tail(&mut self) -> Result<()> {
        let tail = self.tail();
        self.max_tail = self.max_tail.max(tail);
        if tail > TAIL_LIMIT || !tail.is_finite() {
            return Err(Error::CutoffTooSmall { cutoff: self.cutoff, window: TAIL_WINDOW, tail_mass: tail });
        }
        Ok(())
    }

    /// Advance to `t_end` in `steps` equal midpoint steps.
    pub fn advance(&mut self, t_end: f64, steps: usize) -> Result<()> {
        if steps == 0 {
            return Err(Error::InvalidParameter("steps must be ≥ 1".into()));
        }
        if !t_end.is_finite() {
            return Err(Error::NonFinite("propagation time"));
        }
        let dt = (t_end - self.time) / steps as f64;
        let step = phase_exponential(&self.eig, dt);
        for k in 0..steps {
            let phi = self.phase_rate * (self.time + (k as f64 + 0.5) * dt) + self.phase_offset;
            for (_, ket) in self.kets.iter_mut() {
                rotate_ket(ket, -phi);
                *ket = &step * &*ket;
                rotate_ket(ket, phi);
            }
            self.check_tail()?;
        }
        self.time = t_end;
        let trace: f64 = self.kets.iter().map(|(w, k)| w * k.norm_squared()).sum();
        if (trace - self.initial_trace).abs() > TRACE_LEAK_LIMIT {
            return Err(Error::CutoffTooSmall { cutoff: self.cutoff, window: TAIL_WINDOW, tail_mass: self.tail() });
        }
        Ok(())
    }

    pub fn density(&self) -> FockDensity {
        FockDensity::from_weighted_kets(self.cutoff + 1, &self.kets)
    }
}

/// `ρ(t)` from `ρ(0)` by `steps` midpoint steps.
pub fn propagate(rho0: &FockDensity, drive: &DriveSpec, t: f64, steps: usize) -> Result<FockDensity> {
    let mut evo = FockEvolution::new(rho0, drive)?;
    evo.advance(t, steps)?;
    Ok(evo.density())
}
