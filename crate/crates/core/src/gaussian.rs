//! Gaussian Wigner functions: mean vector plus covariance matrix.
//!
//! A pure Gaussian state has `det Σ = 1/4` and Wigner function
//!
//! ```text
//! W(r) = exp(-½ (r-μ)ᵀ Σ⁻¹ (r-μ)) / (2π √det Σ)
//! ```
//!
//! which peaks at `1/π`. The symmetric characteristic function is
//! `χ(ξ, η) = exp(i(ξ μx + η μp) - ½ kᵀ Σ k)` with `k = (ξ, η)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::phase::{conjugate, rotation_matrix, Mat2, PhaseVector, SymplecticMap};

/// Symmetric positive-definite 2×2 covariance `[[xx, xp], [xp, pp]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix {
    xx: f64,
    xp: f64,
    pp: f64,
}

impl CovarianceMatrix {
    pub fn new(xx: f64, xp: f64, pp: f64) -> Result<Self> {
        if !(xx.is_finite() && xp.is_finite() && pp.is_finite()) {
            return Err(Error::NonFinite("covariance"));
        }
        let det = xx * pp - xp * xp;
        if xx <= 0.0 || det <= 0.0 {
            return Err(Error::NotPositiveDefinite { xx, det });
        }
        Ok(Self { xx, xp, pp })
    }

    pub fn diag(xx: f64, pp: f64) -> Result<Self> {
        Self::new(xx, 0.0, pp)
    }

    /// Builds from a general matrix, symmetrizing the off-diagonal entries.
    pub fn from_mat2(m: Mat2) -> Result<Self> {
        Self::new(m.xx, 0.5 * (m.xp + m.px), m.pp)
    }

    pub fn xx(&self) -> f64 {
        self.xx
    }

    pub fn xp(&self) -> f64 {
        self.xp
    }

    pub fn pp(&self) -> f64 {
        self.pp
    }

    pub fn as_mat2(&self) -> Mat2 {
        Mat2::new(self.xx, self.xp, self.xp, self.pp)
    }

    pub fn det(&self) -> f64 {
        self.xx * self.pp - self.xp * self.xp
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        Mat2::new(self.pp / det, -self.xp / det, -self.xp / det, self.xx / det)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.pp);
        let half_gap = (0.5 * (self.xx - self.pp)).hypot(self.xp);
        (mean + half_gap, mean - half_gap)
    }

    /// `m Σ mᵀ`, re-validated.
    pub fn transformed(&self, m: Mat2) -> Result<Self> {
        Self::from_mat2(conjugate(m, self.as_mat2()))
    }

    /// `m Σ mᵀ` for maps known to keep Σ positive definite (det m ≠ 0).
    pub(crate) fn transformed_unchecked(&self, m: Mat2) -> Self {
        let c = conjugate(m, self.as_mat2());
        Self { xx: c.xx, xp: 0.5 * (c.xp + c.px), pp: c.pp }
    }

    pub fn max_abs_diff(&self, other: &CovarianceMatrix) -> f64 {
        self.as_mat2().max_abs_diff(other.as_mat2())
    }

    /// Quadratic form `kᵀ Σ k`.
    pub fn quadratic_form(&self, k: PhaseVector) -> f64 {
        self.xx * k.x * k.x + 2.0 * self.xp * k.x * k.p + self.pp * k.p * k.p
    }
}

/// Squeeze parameter ζ = s·e^{iθ}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezeSpec {
    pub s: f64,
    pub theta: f64,
}

impl SqueezeSpec {
    pub fn real(s: f64) -> Self {
        Self { s, theta: 0.0 }
    }

    pub fn zeta(&self) -> C64 {
        C64::from_polar(self.s, self.theta)
    }
}

/// Displacement α = (a + i b)/√2, which moves the mean to (a, b).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSpec {
    pub a: f64,
    pub b: f64,
}

impl DisplacementSpec {
    pub fn alpha(&self) -> C64 {
        C64::new(self.a, self.b) / 2f64.sqrt()
    }

    pub fn mean(&self) -> PhaseVector {
        PhaseVector::new(self.a, self.b)
    }
}

/// The 1/e level set of a Gaussian Wigner function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourEllipse {
    pub center: PhaseVector,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Angle of the major axis from the x-axis, in (-π/2, π/2].
    pub orientation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub mean: PhaseVector,
    pub cov: CovarianceMatrix,
}

/// Relative eigenvalue gap below which an ellipse counts as a circle.
const CIRCLE_TOL: f64 = 1e-12;

impl GaussianState {
    pub fn new(mean: PhaseVector, cov: CovarianceMatrix) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::NonFinite("mean"));
        }
        Ok(Self { mean, cov })
    }

    /// `D(α) S(ζ) |0⟩`. For θ ≠ 0 the squeezed quadrature lies at angle θ/2.
    pub fn squeezed_coherent(displacement: DisplacementSpec, squeeze: SqueezeSpec) -> Result<Self> {
        if !(squeeze.s.is_finite() && squeeze.theta.is_finite()) {
            return Err(Error::NonFinite("squeeze"));
        }
        let base = CovarianceMatrix::diag(0.5 * (-2.0 * squeeze.s).exp(), 0.5 * (2.0 * squeeze.s).exp())?;
        let cov = base.transformed(rotation_matrix(0.5 * squeeze.theta))?;
        Self::new(displacement.mean(), cov)
    }

    pub fn det(&self) -> f64 {
        self.cov.det()
    }

    /// Push the state through an affine map: μ ↦ Mμ + c, Σ ↦ MΣMᵀ.
    pub fn transformed(&self, map: &SymplecticMap) -> Result<Self> {
        Self::new(map.apply(self.mean), self.cov.transformed(map.matrix)?)
    }

    pub fn max_abs_diff(&self, other: &GaussianState) -> f64 {
        self.mean.max_abs_diff(other.mean).max(self.cov.max_abs_diff(&other.cov))
    }
}

/// The vacuum: mean 0, Σ = ½ I.
pub fn vacuum() -> GaussianState {
    GaussianState { mean: PhaseVector::ZERO, cov: CovarianceMatrix { xx: 0.5, xp: 0.0, pp: 0.5 } }
}

/// Ideal squeezed state displaced along x: σx² = e^{-2s}/2, σp² = e^{2s}/2.
pub fn ideal_squeezed(mu_x: f64, s: f64) -> Result<GaussianState> {
    GaussianState::squeezed_coherent(DisplacementSpec { a: mu_x, b: 0.0 }, SqueezeSpec::real(s))
}

/// Squeeze strength that yields standard deviation `sigma_x` along x.
pub fn squeeze_for_sigma_x(sigma_x: f64) -> f64 {
    -0.5 * (2.0 * sigma_x * sigma_x).ln()
}

pub fn wigner_value(state: &GaussianState, r: PhaseVector) -> Result<f64> {
    let det = state.cov.det();
    if det.is_nan() || det <= 0.0 {
        return Err(Error::NotPositiveDefinite { xx: state.cov.xx, det });
    }
    let d = r - state.mean;
    let q = state.cov.inverse().apply(d).dot(d);
    Ok((-0.5 * q).exp() / (2.0 * PI * det.sqrt()))
}

/// Symmetric characteristic function Tr[ρ D(χ)] with χ = (-η + iξ)/√2.
pub fn characteristic_value(state: &GaussianState, xi: f64, eta: f64) -> C64 {
    let k = PhaseVector::new(xi, eta);
    let phase = k.dot(state.mean);
    let decay = -0.5 * state.cov.quadratic_form(k);
    C64::from_polar(decay.exp(), phase)
}

pub fn contour_1e(state: &GaussianState) -> ContourEllipse {
    let cov = state.cov;
    let (major, minor) = cov.eigenvalues();
    let diff = cov.xx - cov.pp;
    let scale = major.abs().max(f64::MIN_POSITIVE);
    let orientation = if diff.abs() <= CIRCLE_TOL * scale && cov.xp.abs() <= CIRCLE_TOL * scale {
        0.0
    } else {
        normalize_axis_angle(0.5 * (2.0 * cov.xp).atan2(diff))
    };
    ContourEllipse {
        center: state.mean,
        semi_major: (2.0 * major).sqrt(),
        semi_minor: (2.0 * minor).sqrt(),
        orientation,
    }
}

/// Maps an axis angle into (-π/2, π/2]; axes are defined modulo π.
pub fn normalize_axis_angle(theta: f64) -> f64 {
    let mut a = theta.rem_euclid(PI);
    if a > FRAC_PI_2 {
        a -= PI;
    }
    a
}

/// Distance between two axis angles modulo π.
pub fn axis_angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2, SQRT_2};

    #[test]
    fn vacuum_basics() {
        let v = vacuum();
        assert_eq!(v.cov.as_mat2(), Mat2::diag(0.5, 0.5));
        assert!((v.det() - 0.25).abs() < 1e-15);
        assert!((wigner_value(&v, PhaseVector::ZERO).unwrap() - 1.0 / PI).abs() < 1e-15);
        let off = wigner_value(&v, PhaseVector::new(1.0, 0.0)).unwrap();
        assert!((off - 1.0 / (PI * E)).abs() < 1e-15);
    }

    #[test]
    fn ideal_squeezed_widths() {
        let s0 = ideal_squeezed(3.0, 0.0).unwrap();
        assert!(s0.cov.max_abs_diff(&vacuum().cov) < 1e-15);
        assert_eq!(s0.mean, PhaseVector::new(3.0, 0.0));

        let st = ideal_squeezed(4.0, -LN_2 / 2.0).unwrap();
        assert!((st.cov.xx().sqrt() - 1.0).abs() < 1e-12);
        assert!((st.cov.pp().sqrt() - 0.5).abs() < 1e-12);
        for s in [-1.3, -0.2, 0.0, 0.4, 1.1] {
            let st = ideal_squeezed(0.0, s).unwrap();
            assert!((st.cov.xx().sqrt() * st.cov.pp().sqrt() - 0.5).abs() < 1e-12);
        }
        assert!((squeeze_for_sigma_x(1.0) + LN_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn wigner_peaks_at_mean() {
        let st = ideal_squeezed(-2.0, 0.3).unwrap();
        assert!((wigner_value(&st, st.mean).unwrap() - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn characteristic_at_origin_and_bounded() {
        let st = ideal_squeezed(4.0, -LN_2 / 2.0).unwrap();
        assert_eq!(characteristic_value(&st, 0.0, 0.0), C64::new(1.0, 0.0));
        for i in 0..21 {
            for j in 0..21 {
                let xi = -3.0 + 0.3 * i as f64;
                let eta = -3.0 + 0.3 * j as f64;
                assert!(characteristic_value(&st, xi, eta).norm() <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn contour_of_vacuum_is_unit_circle() {
        let c = contour_1e(&vacuum());
        assert!((c.semi_major - 1.0).abs() < 1e-15);
        assert!((c.semi_minor - 1.0).abs() < 1e-15);
        assert_eq!(c.orientation, 0.0);
    }

    #[test]
    fn contour_of_squeezed_state() {
        let st = ideal_squeezed(0.0, -LN_2 / 2.0).unwrap();
        let c = contour_1e(&st);
        assert!((c.semi_major - SQRT_2).abs() < 1e-12);
        assert!((c.semi_minor - SQRT_2 / 2.0).abs() < 1e-12);
        assert!(c.orientation.abs() < 1e-12);

        let rotated = GaussianState::new(st.mean, st.cov.transformed(rotation_matrix(0.4)).unwrap()).unwrap();
        let cr = contour_1e(&rotated);
        assert!(axis_angle_distance(cr.orientation, c.orientation + 0.4) < 1e-12);
    }

    #[test]
    fn contour_lies_on_one_over_e_level() {
        let st = GaussianState::new(PhaseVector::new(1.0, -0.5), CovarianceMatrix::new(0.8, 0.3, 0.6).unwrap()).unwrap();
        let c = contour_1e(&st);
        let peak = wigner_value(&st, st.mean).unwrap();
        let u = rotation_matrix(c.orientation).apply(PhaseVector::new(c.semi_major, 0.0));
        let v = rotation_matrix(c.orientation).apply(PhaseVector::new(0.0, c.semi_minor));
        for point in [st.mean + u, st.mean - v] {
            let w = wigner_value(&st, point).unwrap();
            assert!((w - peak / E).abs() < 1e-14);
        }
    }

    #[test]
    fn rotated_squeeze_direction() {
        let st = GaussianState::squeezed_coherent(DisplacementSpec { a: 1.0, b: 2.0 }, SqueezeSpec { s: 0.5, theta: 1.0 }).unwrap();
        assert_eq!(st.mean, PhaseVector::new(1.0, 2.0));
        let c = contour_1e(&st);
        // the squeezed (minor) axis sits at θ/2, so the major axis is perpendicular to it
        assert!(axis_angle_distance(c.orientation, 0.5 + FRAC_PI_2) < 1e-12);
        assert!((st.det() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_covariance() {
        assert!(matches!(CovarianceMatrix::new(1.0, 2.0, 1.0), Err(Error::NotPositiveDefinite { .. })));
        assert!(matches!(CovarianceMatrix::new(-1.0, 0.0, -1.0), Err(Error::NotPositiveDefinite { .. })));
        assert!(matches!(CovarianceMatrix::new(f64::NAN, 0.0, 1.0), Err(Error::NonFinite(_))));
    }

    #[test]
    fn axis_angles() {
        assert!((normalize_axis_angle(PI) - 0.0).abs() < 1e-15);
        assert!((normalize_axis_angle(FRAC_PI_2) - FRAC_PI_2).abs() < 1e-15);
        assert!((normalize_axis_angle(-FRAC_PI_2) - FRAC_PI_2).abs() < 1e-15);
        assert!(axis_angle_distance(0.1, PI - 0.1) < 0.2 + 1e-15);
    }
}
