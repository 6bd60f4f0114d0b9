//! Real 2×2 linear algebra on the (x, p) phase plane.
//!
//! Everything here is dimensionless with ħ = 1 and unit mass. Angles are in
//! radians and a positive angle is a counterclockwise rotation.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point (or displacement) in phase space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector {
    pub x: f64,
    pub p: f64,
}

impl PhaseVector {
    pub const ZERO: PhaseVector = PhaseVector { x: 0.0, p: 0.0 };

    pub const fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }

    pub fn dot(self, other: PhaseVector) -> f64 {
        self.x * other.x + self.p * other.p
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.p)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.x, k * self.p)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.p.is_finite()
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(self, other: PhaseVector) -> f64 {
        (self.x - other.x).abs().max((self.p - other.p).abs())
    }
}

impl Add for PhaseVector {
    type Output = PhaseVector;
    fn add(self, rhs: PhaseVector) -> PhaseVector {
        PhaseVector::new(self.x + rhs.x, self.p + rhs.p)
    }
}

impl Sub for PhaseVector {
    type Output = PhaseVector;
    fn sub(self, rhs: PhaseVector) -> PhaseVector {
        PhaseVector::new(self.x - rhs.x, self.p - rhs.p)
    }
}

impl Neg for PhaseVector {
    type Output = PhaseVector;
    fn neg(self) -> PhaseVector {
        PhaseVector::new(-self.x, -self.p)
    }
}

/// Row-major real 2×2 matrix `[[xx, xp], [px, pp]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub xx: f64,
    pub xp: f64,
    pub px: f64,
    pub pp: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(xx: f64, xp: f64, px: f64, pp: f64) -> Self {
        Self { xx, xp, px, pp }
    }

    pub const fn diag(x: f64, p: f64) -> Self {
        Self::new(x, 0.0, 0.0, p)
    }

    pub fn transpose(self) -> Self {
        Self::new(self.xx, self.px, self.xp, self.pp)
    }

    pub fn det(self) -> f64 {
        self.xx * self.pp - self.xp * self.px
    }

    pub fn trace(self) -> f64 {
        self.xx + self.pp
    }

    /// Inverse, or `None` when the determinant vanishes.
    pub fn inverse(self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Self::new(self.pp / det, -self.xp / det, -self.px / det, self.xx / det))
    }

    pub fn apply(self, r: PhaseVector) -> PhaseVector {
        PhaseVector::new(self.xx * r.x + self.xp * r.p, self.px * r.x + self.pp * r.p)
    }

    pub fn is_finite(self) -> bool {
        self.xx.is_finite() && self.xp.is_finite() && self.px.is_finite() && self.pp.is_finite()
    }

    pub fn max_abs_diff(self, other: Mat2) -> f64 {
        (self.xx - other.xx)
            .abs()
            .max((self.xp - other.xp).abs())
            .max((self.px - other.px).abs())
            .max((self.pp - other.pp).abs())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.xx * rhs.xx + self.xp * rhs.px,
            self.xx * rhs.xp + self.xp * rhs.pp,
            self.px * rhs.xx + self.pp * rhs.px,
            self.px * rhs.xp + self.pp * rhs.pp,
        )
    }
}

impl Mul<PhaseVector> for Mat2 {
    type Output = PhaseVector;
    fn mul(self, rhs: PhaseVector) -> PhaseVector {
        self.apply(rhs)
    }
}

/// Counterclockwise rotation by `theta`.
pub fn rotation_matrix(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// `m · r + shift`.
pub fn apply_affine(m: Mat2, shift: PhaseVector, r: PhaseVector) -> PhaseVector {
    m.apply(r) + shift
}

/// `m · a · mᵀ`, the action of a linear map on a covariance-like matrix.
pub fn conjugate(m: Mat2, a: Mat2) -> Mat2 {
    m * a * m.transpose()
}

/// An affine phase-space map `r ↦ matrix · r + shift`.
///
/// Rotations, squeezes and displacements are all of this form; composing
/// them stays in the family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticMap {
    pub matrix: Mat2,
    pub shift: PhaseVector,
}

impl SymplecticMap {
    pub const IDENTITY: SymplecticMap = SymplecticMap { matrix: Mat2::IDENTITY, shift: PhaseVector::ZERO };

    pub fn linear(matrix: Mat2) -> Self {
        Self { matrix, shift: PhaseVector::ZERO }
    }

    pub fn rotation(theta: f64) -> Self {
        Self::linear(rotation_matrix(theta))
    }

    pub fn translation(shift: PhaseVector) -> Self {
        Self { matrix: Mat2::IDENTITY, shift }
    }

    /// `diag(e^{-r}, e^{r})`: contracts x and stretches p for positive `r`.
    pub fn squeeze(r: f64) -> Self {
        Self::linear(Mat2::diag((-r).exp(), r.exp()))
    }

    pub fn apply(&self, r: PhaseVector) -> PhaseVector {
        apply_affine(self.matrix, self.shift, r)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &SymplecticMap) -> SymplecticMap {
        SymplecticMap {
            matrix: self.matrix * inner.matrix,
            shift: self.matrix.apply(inner.shift) + self.shift,
        }
    }

    pub fn inverse(&self) -> Option<SymplecticMap> {
        let inv = self.matrix.inverse()?;
        Some(SymplecticMap { matrix: inv, shift: -inv.apply(self.shift) })
    }

    /// True when the linear part preserves the symplectic form (det = 1).
    pub fn is_symplectic(&self, tol: f64) -> bool {
        (self.matrix.det() - 1.0).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-12;

    #[test]
    fn rotation_zero_is_identity() {
        assert!(rotation_matrix(0.0).max_abs_diff(Mat2::IDENTITY) <= TOL);
    }

    #[test]
    fn quarter_turn_maps_x_to_p() {
        let r = rotation_matrix(FRAC_PI_2).apply(PhaseVector::new(1.0, 0.0));
        assert!(r.max_abs_diff(PhaseVector::new(0.0, 1.0)) <= TOL);
    }

    #[test]
    fn rotation_group_law() {
        let lhs = rotation_matrix(0.3) * rotation_matrix(0.7);
        assert!(lhs.max_abs_diff(rotation_matrix(1.0)) <= TOL);
    }

    #[test]
    fn affine_examples() {
        let r = apply_affine(Mat2::IDENTITY, PhaseVector::ZERO, PhaseVector::new(2.0, 3.0));
        assert_eq!(r, PhaseVector::new(2.0, 3.0));
        let r = apply_affine(rotation_matrix(PI), PhaseVector::ZERO, PhaseVector::new(1.0, 0.0));
        assert!(r.max_abs_diff(PhaseVector::new(-1.0, 0.0)) <= TOL);
        let r = apply_affine(rotation_matrix(-FRAC_PI_2), PhaseVector::ZERO, PhaseVector::new(4.0, 0.0));
        assert!(r.max_abs_diff(PhaseVector::new(0.0, -4.0)) <= TOL);
    }

    #[test]
    fn conjugate_examples() {
        let a = Mat2::diag(1.0, 4.0);
        assert_eq!(conjugate(Mat2::IDENTITY, a), a);
        let c = conjugate(rotation_matrix(-FRAC_PI_2), a);
        assert!(c.max_abs_diff(Mat2::diag(4.0, 1.0)) <= TOL);
        let c = conjugate(rotation_matrix(0.7), a);
        assert!((c.det() - a.det()).abs() <= TOL);
    }

    #[test]
    fn map_composition_and_inverse() {
        let m = SymplecticMap::rotation(0.4).after(&SymplecticMap::translation(PhaseVector::new(1.0, -2.0)));
        let r = PhaseVector::new(0.3, 0.9);
        let expected = rotation_matrix(0.4).apply(r + PhaseVector::new(1.0, -2.0));
        assert!(m.apply(r).max_abs_diff(expected) <= TOL);
        let back = m.inverse().unwrap().apply(m.apply(r));
        assert!(back.max_abs_diff(r) <= TOL);
        assert!(SymplecticMap::squeeze(0.8).is_symplectic(TOL));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        assert!(Mat2::new(1.0, 2.0, 2.0, 4.0).inverse().is_none());
    }
}
