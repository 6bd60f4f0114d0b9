//! Truncated number-basis oracle: dense operators on span{|0⟩, …, |N⟩},
//! time-ordered propagation and Wigner reconstruction.

mod propagate;
mod wigner;

pub use propagate::{default_steps, hamiltonian_at, propagate, quadratic_hamiltonian_su11, FockEvolution, TAIL_LIMIT, TAIL_WINDOW};
pub use wigner::{characteristic, wigner_from_rho, wigner_from_rho_on, CharLattice, GridSpec, WignerField};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, GaussianState};
use crate::phase::PhaseVector;

pub const DEFAULT_CUTOFF: usize = 60;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-8;
const PSD_FLOOR: f64 = -1e-10;

pub type Ket = DVector<C64>;

#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    matrix: DMatrix<C64>,
}

impl FockOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(Error::InvalidParameter(format!("operator must be square with dim ≥ 2, got {}×{}", matrix.nrows(), matrix.ncols())));
        }
        if !matrix.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("operator"));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cutoff(&self) -> usize {
        self.dim() - 1
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn mul(&self, other: &FockOperator) -> Self {
        Self { matrix: &self.matrix * &other.matrix }
    }

    pub fn add(&self, other: &FockOperator) -> Self {
        Self { matrix: &self.matrix + &other.matrix }
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { matrix: &self.matrix * k }
    }

    pub fn commutator(&self, other: &FockOperator) -> Self {
        Self { matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix }
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        &self.matrix * ket
    }

    pub fn max_abs_diff(&self, other: &FockOperator) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |U†U - 1|.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim();
        (self.matrix.adjoint() * &self.matrix - DMatrix::<C64>::identity(dim, dim)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `(â, â†)` on the (N+1)-dimensional truncated basis.
pub fn ladder_ops(cutoff: usize) -> Result<(FockOperator, FockOperator)> {
    if cutoff < 1 {
        return Err(Error::InvalidParameter("cutoff must be ≥ 1".into()));
    }
    let dim = cutoff + 1;
    let mut a = DMatrix::<C64>::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    Ok((FockOperator { matrix: a }, FockOperator { matrix: ad }))
}

pub fn number_op(cutoff: usize) -> FockOperator {
    let dim = cutoff + 1;
    FockOperator { matrix: DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| C64::new(n as f64, 0.0))) }
}

/// `(x̂, p̂)` built from the truncated ladder operators.
pub fn quadrature_ops(cutoff: usize) -> Result<(FockOperator, FockOperator)> {
    let (a, ad) = ladder_ops(cutoff)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let x = a.add(&ad).scale(C64::new(r, 0.0));
    let p = a.add(&ad.scale(C64::new(-1.0, 0.0))).scale(C64::new(0.0, -r));
    Ok((x, p))
}

/// `exp(-i τ H)` for Hermitian `H` via unitary diagonalization.
pub(crate) fn expm_hermitian(h: &DMatrix<C64>, tau: f64) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(h.clone());
    phase_exponential(&eig, tau)
}

pub(crate) fn phase_exponential(eig: &SymmetricEigen<C64, nalgebra::Dyn>, tau: f64) -> DMatrix<C64> {
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = C64::from_polar(1.0, -lambda * tau);
        for z in scaled.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    scaled * v.adjoint()
}

/// `exp(-i t H)` for a time-independent Hermitian `H`.
pub fn unitary_from_hamiltonian(h: &FockOperator, t: f64) -> FockOperator {
    FockOperator { matrix: expm_hermitian(&h.matrix, t) }
}

/// `D(α) = exp(α â† - α* â)`; requires `|α|² ≤ N/4`.
pub fn displacement_op(alpha: C64, cutoff: usize) -> Result<FockOperator> {
    let budget = cutoff as f64 / 4.0;
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::NonFinite("displacement amplitude"));
    }
    if alpha.norm_sqr() > budget {
        return Err(Error::AmplitudeTooLarge { amplitude: alpha.norm_sqr(), budget, cutoff });
    }
    let (a, ad) = ladder_ops(cutoff)?;
    // exp(αâ† - α*â) = exp(-i G) with G = i(αâ† - α*â) Hermitian
    let g = (ad.matrix * alpha - a.matrix * alpha.conj()) * C64::new(0.0, 1.0);
    Ok(FockOperator { matrix: expm_hermitian(&g, 1.0) })
}

/// Largest `|ζ|` accepted by [`squeeze_op`] at the given cutoff.
pub fn squeeze_budget(cutoff: usize) -> f64 {
    1.5 * (cutoff as f64 / DEFAULT_CUTOFF as f64).min(1.0)
}

/// `S(ζ) = exp[(ζ* â² - ζ â†²)/2]`.
pub fn squeeze_op(zeta: C64, cutoff: usize) -> Result<FockOperator> {
    if !(zeta.re.is_finite() && zeta.im.is_finite()) {
        return Err(Error::NonFinite("squeeze parameter"));
    }
    let budget = squeeze_budget(cutoff);
    if zeta.norm() > budget {
        return Err(Error::AmplitudeTooLarge { amplitude: zeta.norm(), budget, cutoff });
    }
    let (a, ad) = ladder_ops(cutoff)?;
    let a2 = &a.matrix * &a.matrix;
    let ad2 = &ad.matrix * &ad.matrix;
    let g = (a2 * zeta.conj() - ad2 * zeta) * C64::new(0.0, 0.5);
    Ok(FockOperator { matrix: expm_hermitian(&g, 1.0) })
}

/// `(K̂0, K̂+, K̂-)` = (½(â†â + ½), ½â†², ½â²).
pub fn su11_ops(cutoff: usize) -> Result<(FockOperator, FockOperator, FockOperator)> {
    if cutoff < 3 {
        return Err(Error::InvalidParameter("su(1,1) operators need cutoff ≥ 3".into()));
    }
    let (a, ad) = ladder_ops(cutoff)?;
    let dim = cutoff + 1;
    let half = C64::new(0.5, 0.0);
    let k0 = number_op(cutoff).add(&FockOperator::identity(dim).scale(half)).scale(half);
    let kp = ad.mul(&ad).scale(half);
    let km = a.mul(&a).scale(half);
    Ok((k0, kp, km))
}

/// Density matrix with the invariants Hermitian (1e-12), unit trace (1e-8)
/// and positive semidefinite (eigenvalues ≥ -1e-10).
#[derive(Clone, Debug, PartialEq)]
pub struct FockDensity {
    matrix: DMatrix<C64>,
}

impl FockDensity {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let op = FockOperator::new(matrix)?;
        let m = op.matrix;
        let herm = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidParameter(format!("density matrix not Hermitian (defect {herm:e})")));
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceLeak { trace, tolerance: TRACE_TOL });
        }
        let min_eig = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < PSD_FLOOR {
            return Err(Error::InvalidParameter(format!("density matrix has eigenvalue {min_eig:e}")));
        }
        Ok(Self { matrix: m })
    }

    pub fn from_ket(ket: &Ket) -> Result<Self> {
        Self::new(ket * ket.adjoint())
    }

    pub(crate) fn from_weighted_kets(dim: usize, kets: &[(f64, Ket)]) -> Self {
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (w, k) in kets {
            m += k * k.adjoint() * C64::new(*w, 0.0);
        }
        Self { matrix: m }
    }

    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::from_ket(&basis_ket(cutoff, 0))
    }

    /// `D(α) S(ζ) |0⟩`.
    pub fn squeezed_coherent(alpha: C64, zeta: C64, cutoff: usize) -> Result<Self> {
        let ket = squeeze_op(zeta, cutoff)?.apply(&basis_ket(cutoff, 0));
        let ket = displacement_op(alpha, cutoff)?.apply(&ket);
        Self::from_ket(&ket)
    }

    /// `D(μx/√2) S(s) |0⟩`: the oracle counterpart of `ideal_squeezed`.
    pub fn ideal_squeezed(mu_x: f64, s: f64, cutoff: usize) -> Result<Self> {
        Self::squeezed_coherent(C64::new(mu_x * std::f64::consts::FRAC_1_SQRT_2, 0.0), C64::new(s, 0.0), cutoff)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cutoff(&self) -> usize {
        self.dim() - 1
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn expectation(&self, op: &FockOperator) -> C64 {
        (&self.matrix * &op.matrix).trace()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Population of the top `window` basis states.
    pub fn tail_mass(&self, window: usize) -> f64 {
        let pops = self.populations();
        pops.iter().rev().take(window).sum()
    }

    /// `|Tr ρσ| / sqrt(Tr ρ² Tr σ²)`.
    pub fn normalized_overlap(&self, other: &FockDensity) -> f64 {
        let cross = (&self.matrix * &other.matrix).trace().norm();
        cross / (self.purity() * other.purity()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &FockDensity) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &FockOperator) -> Self {
        Self { matrix: &u.matrix * &self.matrix * u.matrix.adjoint() }
    }

    /// Eigen-decomposition into weighted kets, dropping weights below 1e-14.
    pub fn kets(&self) -> Vec<(f64, Ket)> {
        let eig = SymmetricEigen::new(self.matrix.clone());
        eig.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 1e-14)
            .map(|(j, &w)| (w, eig.eigenvectors.column(j).into_owned()))
            .collect()
    }
}

pub fn basis_ket(cutoff: usize, n: usize) -> Ket {
    let mut k = Ket::zeros(cutoff + 1);
    k[n] = C64::new(1.0, 0.0);
    k
}

/// Mean `(⟨x̂⟩, ⟨p̂⟩)` and symmetrized covariance.
pub fn moments(rho: &FockDensity) -> Result<(PhaseVector, CovarianceMatrix)> {
    let (x, p) = quadrature_ops(rho.cutoff())?;
    let mx = rho.expectation(&x).re;
    let mp = rho.expectation(&p).re;
    let xx = rho.expectation(&x.mul(&x)).re - mx * mx;
    let pp = rho.expectation(&p.mul(&p)).re - mp * mp;
    let xp = 0.5 * rho.expectation(&x.mul(&p).add(&p.mul(&x))).re - mx * mp;
    Ok((PhaseVector::new(mx, mp), CovarianceMatrix::new(xx, xp, pp)?))
}

pub fn moments_state(rho: &FockDensity) -> Result<GaussianState> {
    let (mean, cov) = moments(rho)?;
    GaussianState::new(mean, cov)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_examples() {
        let (a, ad) = ladder_ops(2).unwrap();
        assert_eq!(a.matrix()[(0, 1)].re, 1.0);
        assert!((a.matrix()[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        let comm = a.commutator(&ad);
        for (got, want) in comm.matrix().diagonal().iter().zip([1.0, 1.0, -2.0]) {
            assert!((got.re - want).abs() < 1e-14);
        }
        assert!(a.apply(&basis_ket(2, 0)).norm() == 0.0);
        assert!(ladder_ops(0).is_err());
    }

    #[test]
    fn displacement_examples() {
        assert!(displacement_op(C64::default(), 10).unwrap().max_abs_diff(&FockOperator::identity(11)) < 1e-14);
        let alpha = C64::new(1.0, 0.5);
        let d = displacement_op(alpha, 60).unwrap();
        assert!((d.matrix()[(0, 0)].re - (-alpha.norm_sqr() / 2.0).exp()).abs() < 1e-10);
        let prod = displacement_op(C64::new(0.8, 0.0), 40).unwrap().mul(&displacement_op(C64::new(-0.8, 0.0), 40).unwrap());
        assert!(prod.max_abs_diff(&FockOperator::identity(41)) < 1e-10);
        assert!(d.unitarity_defect() < 1e-10);
        assert!(matches!(displacement_op(C64::new(4.0, 0.0), 60), Err(Error::AmplitudeTooLarge { .. })));
    }

    #[test]
    fn squeeze_examples() {
        assert!(squeeze_op(C64::default(), 10).unwrap().max_abs_diff(&FockOperator::identity(11)) < 1e-14);
        let s = -(2f64.ln()) / 2.0;
        let rho = FockDensity::ideal_squeezed(0.0, s, 60).unwrap();
        let (_, cov) = moments(&rho).unwrap();
        assert!((cov.xx() - 1.0).abs() < 1e-8 && (cov.pp() - 0.25).abs() < 1e-8);
        assert!(squeeze_op(C64::new(0.7, 0.2), 60).unwrap().unitarity_defect() < 1e-10);
        assert!(squeeze_op(C64::new(1.6, 0.0), 60).is_err());
    }

    #[test]
    fn moment_examples() {
        let (m, c) = moments(&FockDensity::vacuum(30).unwrap()).unwrap();
        assert!(m.norm() < 1e-14);
        assert!(c.max_abs_diff(&CovarianceMatrix::diag(0.5, 0.5).unwrap()) < 1e-10);
        let alpha = C64::new(1.0, 2.0) * std::f64::consts::FRAC_1_SQRT_2;
        let coh = FockDensity::squeezed_coherent(alpha, C64::default(), 60).unwrap();
        let (m, _) = moments(&coh).unwrap();
        assert!(m.max_abs_diff(PhaseVector::new(1.0, 2.0)) < 1e-10);
        let sq = FockDensity::squeezed_coherent(C64::default(), C64::new(0.5, 0.0), 60).unwrap();
        let (_, c) = moments(&sq).unwrap();
        assert!(c.max_abs_diff(&CovarianceMatrix::diag((-1f64).exp() / 2.0, 1f64.exp() / 2.0).unwrap()) < 1e-10);
    }

    #[test]
    fn su11_algebra() {
        let n = 12;
        let (k0, kp, km) = su11_ops(n).unwrap();
        let c1 = k0.commutator(&kp).add(&kp.scale(C64::new(-1.0, 0.0)));
        let c2 = km.commutator(&kp).add(&k0.scale(C64::new(-2.0, 0.0)));
        for row in 0..n - 1 {
            for col in 0..=n {
                assert!(c1.matrix()[(row, col)].norm() < 1e-12);
                assert!(c2.matrix()[(row, col)].norm() < 1e-12);
            }
        }
        assert!(su11_ops(2).is_err());
    }

    #[test]
    fn density_invariants() {
        let mut bad = DMatrix::<C64>::zeros(3, 3);
        bad[(0, 0)] = C64::new(0.9, 0.0);
        assert!(matches!(FockDensity::new(bad), Err(Error::TraceLeak { .. })));
        let mut neg = DMatrix::<C64>::zeros(3, 3);
        neg[(0, 0)] = C64::new(1.5, 0.0);
        neg[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(FockDensity::new(neg).is_err());
        let rho = FockDensity::vacuum(5).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert_eq!(rho.kets().len(), 1);
    }
}
