//! Wigner reconstruction from the symmetric characteristic function
//! `C(ξ, η) = Tr[ρ D(χ)]`, `χ = (-η + iξ)/√2`, followed by the discrete
//! Fourier sum `W(x, p) = (2π)^{-2} Σ C(ξ, η) e^{-i(ξx + ηp)} Δξ Δη`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{moments, FockDensity};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussian::{CovarianceMatrix, GaussianState};
use crate::phase::PhaseVector;

const MIN_SAMPLES: usize = 64;
const WINDOW_SIGMAS: f64 = 6.0;
/// `|C| ≤ e^{-LATTICE_EXPONENT/2}` beyond the adaptive lattice.
const LATTICE_EXPONENT: f64 = 60.0;
/// Alias images sit at least this many σ away from any grid point.
const ALIAS_SIGMAS: f64 = 9.0;
/// Largest characteristic value tolerated on the lattice boundary.
const EDGE_TOL: f64 = 1e-6;

/// Rectangular phase-space grid, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, p_min: f64, p_max: f64, nx: usize, np: usize) -> Result<Self> {
        if ![x_min, x_max, p_min, p_max].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("grid window"));
        }
        if x_min >= x_max || p_min >= p_max {
            return Err(Error::InvalidParameter("grid windows must have min < max".into()));
        }
        if nx < MIN_SAMPLES || np < MIN_SAMPLES {
            return Err(Error::InvalidParameter(format!("grid needs ≥ {MIN_SAMPLES} samples per axis, got {nx}×{np}")));
        }
        Ok(Self { x_min, x_max, p_min, p_max, nx, np })
    }

    /// Square window `[-half, half]²`.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    /// Window `mean ± k σ` per axis.
    pub fn around(state: &GaussianState, sigmas: f64, n: usize) -> Result<Self> {
        let (sx, sp) = (state.cov.xx().sqrt(), state.cov.pp().sqrt());
        let (mx, mp) = (state.mean.x, state.mean.p);
        Self::new(mx - sigmas * sx, mx + sigmas * sx, mp - sigmas * sp, mp + sigmas * sp, n, n)
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn ps(&self) -> Vec<f64> {
        linspace(self.p_min, self.p_max, self.np)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    /// Whether the window contains `mean ± 6σ` on both axes.
    pub fn contains_state(&self, mean: PhaseVector, cov: &CovarianceMatrix) -> bool {
        let (sx, sp) = (WINDOW_SIGMAS * cov.xx().sqrt(), WINDOW_SIGMAS * cov.pp().sqrt());
        self.x_min <= mean.x - sx && mean.x + sx <= self.x_max && self.p_min <= mean.p - sp && mean.p + sp <= self.p_max
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| if k + 1 == n { hi } else { lo + h * k as f64 }).collect()
}

/// Symmetric `(ξ, η)` lattice centred on the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharLattice {
    pub xi_half: f64,
    pub eta_half: f64,
    pub n_xi: usize,
    pub n_eta: usize,
}

impl CharLattice {
    /// 128 × 128 over `[-8, 8]²`.
    pub fn default_square() -> Self {
        Self { xi_half: 8.0, eta_half: 8.0, n_xi: 128, n_eta: 128 }
    }

    /// Sized from the state's moments: the lattice reaches `kᵀΣk = 60` and
    /// its spacing keeps alias images 9σ clear of every grid point.
    pub fn adaptive(mean: PhaseVector, cov: &CovarianceMatrix, grid: &GridSpec) -> Self {
        let inv = cov.inverse();
        let xi_half = (LATTICE_EXPONENT * inv.xx).sqrt();
        let eta_half = (LATTICE_EXPONENT * inv.pp).sqrt();
        let reach_x = (grid.x_min - mean.x).abs().max((grid.x_max - mean.x).abs());
        let reach_p = (grid.p_min - mean.p).abs().max((grid.p_max - mean.p).abs());
        let h_xi = 2.0 * PI / (reach_x + ALIAS_SIGMAS * cov.xx().sqrt());
        let h_eta = 2.0 * PI / (reach_p + ALIAS_SIGMAS * cov.pp().sqrt());
        let n_xi = (2.0 * xi_half / h_xi).ceil() as usize + 1;
        let n_eta = (2.0 * eta_half / h_eta).ceil() as usize + 1;
        Self { xi_half, eta_half, n_xi: n_xi.max(3), n_eta: n_eta.max(3) }
    }

    pub fn xis(&self) -> Vec<f64> {
        linspace(-self.xi_half, self.xi_half, self.n_xi)
    }

    pub fn etas(&self) -> Vec<f64> {
        linspace(-self.eta_half, self.eta_half, self.n_eta)
    }
}

/// Sampled Wigner field, row-major in x: `values[ix * np + ip]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerField {
    pub grid: GridSpec,
    pub lattice: CharLattice,
    pub values: Vec<f64>,
    /// Largest imaginary residue of the Fourier sum.
    pub max_imag: f64,
    /// Trapezoid integral over the grid.
    pub integral: f64,
}

impl WignerField {
    pub fn at(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.grid.np + ip]
    }

    /// `max |W - f|` over the grid.
    pub fn sup_diff<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let (xs, ps) = (self.grid.xs(), self.grid.ps());
        let mut worst: f64 = 0.0;
        for (ix, &x) in xs.iter().enumerate() {
            for (ip, &p) in ps.iter().enumerate() {
                let d = (self.at(ix, ip) - f(x, p)).abs();
                worst = if d.is_nan() { f64::NAN } else { worst.max(d) };
            }
        }
        worst
    }
}

/// `⟨j|D(χ)|j+k⟩`-type magnitudes: `l_j = sqrt(j!/(j+k)!) x^{k/2} e^{-x/2} L_j^{(k)}(x)`
/// for `j = 0..len`, by the normalized three-term recurrence.
fn scaled_laguerre(k: usize, x: f64, ln_k_factorial: f64, len: usize, out: &mut Vec<f64>) {
    out.clear();
    let kf = k as f64;
    let l0 = (0.5 * kf * x.ln() - 0.5 * x - 0.5 * ln_k_factorial).exp();
    out.push(l0);
    if len < 2 {
        return;
    }
    out.push((1.0 + kf - x) * l0 / (1.0 + kf).sqrt());
    for j in 1..len - 1 {
        let jf = j as f64;
        let denom = ((jf + 1.0) * (jf + 1.0 + kf)).sqrt();
        let next = ((2.0 * jf + 1.0 + kf - x) * out[j] - (jf * (jf + kf)).sqrt() * out[j - 1]) / denom;
        out.push(next);
    }
}

/// `Tr[ρ D(χ)]` with `χ = (-η + iξ)/√2`, from exact displacement matrix
/// elements of the untruncated operator.
pub fn characteristic(rho: &FockDensity, xi: f64, eta: f64) -> C64 {
    let chi = C64::new(-eta, xi) * FRAC_1_SQRT_2;
    let x = chi.norm_sqr();
    let m = rho.matrix();
    let dim = rho.dim();
    if x == 0.0 {
        return m.trace();
    }
    let unit = C64::from_polar(1.0, chi.arg());
    let mut lower_phase = C64::new(1.0, 0.0);
    let mut ln_fact = 0.0;
    let mut l = Vec::with_capacity(dim);
    let mut total = C64::default();
    for k in 0..dim {
        if k > 0 {
            ln_fact += (k as f64).ln();
            lower_phase *= unit;
        }
        scaled_laguerre(k, x, ln_fact, dim - k, &mut l);
        // ⟨n+k|D|n⟩ = e^{ikθ} l_n,  ⟨n|D|n+k⟩ = (-e^{-iθ})^k l_n
        let upper_phase = if k % 2 == 0 { lower_phase.conj() } else { -lower_phase.conj() };
        let mut lower = C64::default();
        let mut upper = C64::default();
        for (n, &ln) in l.iter().enumerate() {
            lower += m[(n, n + k)] * ln;
            if k > 0 {
                upper += m[(n + k, n)] * ln;
            }
        }
        total += lower * lower_phase;
        if k > 0 {
            total += upper * upper_phase;
        }
    }
    total
}

/// Wigner field on `grid` with a lattice sized from the moments of `rho`.
pub fn wigner_from_rho(rho: &FockDensity, grid: &GridSpec) -> Result<WignerField> {
    let (mean, cov) = moments(rho)?;
    if !grid.contains_state(mean, &cov) {
        return Err(Error::WindowTooSmall(format!(
            "grid x ∈ [{}, {}], p ∈ [{}, {}] does not contain mean ± 6σ",
            grid.x_min, grid.x_max, grid.p_min, grid.p_max
        )));
    }
    wigner_from_rho_on(rho, grid, &CharLattice::adaptive(mean, &cov, grid), Exec::default())
}

/// Wigner field on `grid` from the characteristic function sampled on `lattice`.
pub fn wigner_from_rho_on(rho: &FockDensity, grid: &GridSpec, lattice: &CharLattice, exec: Exec) -> Result<WignerField> {
    let xis = lattice.xis();
    let etas = lattice.etas();
    let (nxi, neta) = (xis.len(), etas.len());
    let rows: Vec<Vec<C64>> = exec.map(&xis, |&xi| etas.iter().map(|&eta| characteristic(rho, xi, eta)).collect());

    let edge = (0..nxi)
        .flat_map(|i| (0..neta).map(move |j| (i, j)))
        .filter(|&(i, j)| i == 0 || j == 0 || i + 1 == nxi || j + 1 == neta)
        .map(|(i, j)| rows[i][j].norm())
        .fold(0.0, f64::max);
    if edge > EDGE_TOL {
        return Err(Error::WindowTooSmall(format!("characteristic function is {edge:e} on the lattice boundary")));
    }

    let h_xi = 2.0 * lattice.xi_half / (nxi - 1) as f64;
    let h_eta = 2.0 * lattice.eta_half / (neta - 1) as f64;
    let norm = h_xi * h_eta / (4.0 * PI * PI);
    let xs = grid.xs();
    let ps = grid.ps();

    let fields: Vec<(Vec<f64>, f64)> = exec.map(&xs, |&x| {
        // partial[j] = Σ_i C(ξ_i, η_j) e^{-iξ_i x}
        let mut partial = vec![C64::default(); neta];
        for (i, &xi) in xis.iter().enumerate() {
            let w = C64::from_polar(1.0, -xi * x);
            for (acc, c) in partial.iter_mut().zip(&rows[i]) {
                *acc += c * w;
            }
        }
        let mut imag: f64 = 0.0;
        let row = ps
            .iter()
            .map(|&p| {
                let v: C64 = partial.iter().zip(&etas).map(|(c, &eta)| c * C64::from_polar(1.0, -eta * p)).sum::<C64>() * norm;
                imag = imag.max(v.im.abs());
                v.re
            })
            .collect();
        (row, imag)
    });

    let max_imag = fields.iter().map(|(_, m)| *m).fold(0.0, f64::max);
    let values: Vec<f64> = fields.into_iter().flat_map(|(row, _)| row).collect();
    let (nx, np) = (grid.nx, grid.np);
    let trap = |k: usize, n: usize| if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
    let mut integral = 0.0;
    for ix in 0..nx {
        for ip in 0..np {
            integral += trap(ix, nx) * trap(ip, np) * values[ix * np + ip];
        }
    }
    integral *= grid.dx() * grid.dp();
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("Wigner field"));
    }
    Ok(WignerField { grid: *grid, lattice: *lattice, values, max_imag, integral })
}
