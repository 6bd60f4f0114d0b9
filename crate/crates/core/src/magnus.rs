//! Magnus series of the linearly driven oscillator in the interaction picture.
//!
//! `V_I(t) = g(e^{-iΩt} α â + e^{iΩt} α* â†)` is linear in the ladder
//! operators, so `[V_I(t1), V_I(t2)]` is a multiple of the identity and every
//! term past the second vanishes. The propagator is then exactly
//! `U_I(t) = e^{-i A2(t)} D(β(t))` with `β(t) = (g/Ω) α* (1 - e^{iΩt})`.
//!
//! Operators are carried symbolically as `c_a â + c_ad â† + c_id 𝟙`.

use std::ops::{Add, Mul};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::drive::LinearDrive;
use crate::error::Result;
use crate::phase::PhaseVector;
use crate::quadrature::GaussLegendre;

/// Nodes per nesting level for the first and second terms.
pub const DEFAULT_NODES: usize = 64;
/// Nodes per nesting level for the third term, which vanishes identically.
pub const A3_NODES: usize = 16;

/// Upper bound on the phase (radians) swept by one quadrature panel.
const PANEL_PHASE: f64 = 8.0 * std::f64::consts::PI;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `c_a â + c_ad â† + c_id 𝟙`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearOperatorForm {
    pub c_a: C64,
    pub c_ad: C64,
    pub c_id: C64,
}

impl LinearOperatorForm {
    pub fn identity(c: C64) -> Self {
        Self { c_id: c, ..Self::default() }
    }

    /// `[F, G]` using `[â, â†] = 1`; always a pure identity term.
    pub fn commutator(&self, other: &LinearOperatorForm) -> LinearOperatorForm {
        Self::identity(self.c_a * other.c_ad - self.c_ad * other.c_a)
    }

    pub fn norm(&self) -> f64 {
        (self.c_a.norm_sqr() + self.c_ad.norm_sqr() + self.c_id.norm_sqr()).sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.c_ad - self.c_a.conj()).norm() <= tol && self.c_id.im.abs() <= tol
    }
}

impl Add for LinearOperatorForm {
    type Output = LinearOperatorForm;
    fn add(self, rhs: LinearOperatorForm) -> LinearOperatorForm {
        LinearOperatorForm { c_a: self.c_a + rhs.c_a, c_ad: self.c_ad + rhs.c_ad, c_id: self.c_id + rhs.c_id }
    }
}

impl Mul<C64> for LinearOperatorForm {
    type Output = LinearOperatorForm;
    fn mul(self, k: C64) -> LinearOperatorForm {
        LinearOperatorForm { c_a: self.c_a * k, c_ad: self.c_ad * k, c_id: self.c_id * k }
    }
}

impl Mul<f64> for LinearOperatorForm {
    type Output = LinearOperatorForm;
    fn mul(self, k: f64) -> LinearOperatorForm {
        self * C64::new(k, 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnusTerms {
    /// Displacement with `e^{-iA1} = D(beta)`.
    pub beta: C64,
    /// Scalar second term A2.
    pub phi: f64,
    /// Norm of the accumulated third term.
    pub a3_norm: f64,
}

/// The interaction-picture propagator `e^{-i phase} D(displacement)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpPropagator {
    pub displacement: C64,
    pub phase: f64,
    /// ν(t) = -(g/Ω) α* e^{iΩt}.
    pub nu: C64,
    /// (g/Ω) α*.
    pub static_displacement: C64,
    /// Phase in the factored form `e^{-i split_phase} D(ν) D((g/Ω) α*)`.
    pub split_phase: f64,
}

impl IpPropagator {
    pub fn mean_shift(&self) -> PhaseVector {
        displacement_to_shift(self.displacement)
    }
}

/// Phase-space shift `√2 (Re β, Im β)` produced by `D(β)`.
pub fn displacement_to_shift(beta: C64) -> PhaseVector {
    PhaseVector::new(beta.re, beta.im).scale(2f64.sqrt())
}

pub fn vi_at(d: &LinearDrive, t: f64) -> LinearOperatorForm {
    let alpha = d.alpha();
    let phase = C64::from_polar(1.0, d.omega() * t);
    LinearOperatorForm { c_a: alpha * d.g * phase.conj(), c_ad: alpha.conj() * d.g * phase, c_id: C64::default() }
}

/// `β(t) = (g/Ω) α* (1 - e^{iΩt})`.
pub fn magnus_a1_analytic(d: &LinearDrive, t: f64) -> Result<C64> {
    let omega = d.nonresonant_omega()?;
    let gamma = d.alpha().conj() * (d.g / omega);
    Ok(gamma * (C64::new(1.0, 0.0) - C64::from_polar(1.0, omega * t)))
}

/// `A2(t) = (g²|α|²/Ω²)(Ωt - sin Ωt)`.
pub fn magnus_a2_analytic(d: &LinearDrive, t: f64) -> Result<f64> {
    let omega = d.nonresonant_omega()?;
    let k = d.g * d.g * d.alpha().norm_sqr() / (omega * omega);
    Ok(k * (omega * t - (omega * t).sin()))
}

/// Ω = 0: `V_I` is constant, `β = -i g α* t` and A2 vanishes.
pub fn magnus_a1_resonant(d: &LinearDrive, t: f64) -> C64 {
    -I * d.alpha().conj() * (d.g * t)
}

pub fn magnus_terms_analytic(d: &LinearDrive, t: f64) -> Result<MagnusTerms> {
    if d.is_resonant() {
        return Ok(MagnusTerms { beta: magnus_a1_resonant(d, t), phi: 0.0, a3_norm: 0.0 });
    }
    Ok(MagnusTerms { beta: magnus_a1_analytic(d, t)?, phi: magnus_a2_analytic(d, t)?, a3_norm: 0.0 })
}

fn panels_for(d: &LinearDrive, span: f64) -> usize {
    ((d.omega().abs() * span.abs() / PANEL_PHASE).ceil() as usize).max(1)
}

fn rule(d: &LinearDrive, gl: &GaussLegendre, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    gl.composite(lo, hi, panels_for(d, hi - lo))
}

/// `A1 = ∫₀ᵗ V_I`, returned as the displacement β with `e^{-iA1} = D(β)`.
pub fn magnus_a1_numeric(d: &LinearDrive, t: f64, nodes: usize) -> Result<C64> {
    let gl = GaussLegendre::new(nodes)?;
    let a1 = rule(d, &gl, 0.0, t)
        .into_iter()
        .fold(LinearOperatorForm::default(), |acc, (t1, w)| acc + vi_at(d, t1) * w);
    Ok(-I * a1.c_ad)
}

/// `A2 = (1/2i) ∫₀ᵗ dt2 ∫₀^{t2} dt1 [V_I(t1), V_I(t2)]`.
pub fn magnus_a2_numeric(d: &LinearDrive, t: f64, nodes: usize) -> Result<f64> {
    let gl = GaussLegendre::new(nodes)?;
    let mut acc = LinearOperatorForm::default();
    for (t2, w2) in rule(d, &gl, 0.0, t) {
        // the commutator is bilinear: integrate V_I(t1) first
        let inner = rule(d, &gl, 0.0, t2)
            .into_iter()
            .fold(LinearOperatorForm::default(), |s, (t1, w1)| s + vi_at(d, t1) * w1);
        acc = acc + inner.commutator(&vi_at(d, t2)) * w2;
    }
    Ok((acc.c_id / (2.0 * I)).re)
}

/// Norm of `A3 = (1/3! i²) ∫∫∫ ([V1,[V2,V3]] + [V3,[V2,V1]])`.
pub fn magnus_a3_numeric(d: &LinearDrive, t: f64, nodes: usize) -> Result<f64> {
    let gl = GaussLegendre::new(nodes)?;
    let mut acc = LinearOperatorForm::default();
    for (t3, w3) in gl.on_interval(0.0, t) {
        let v3 = vi_at(d, t3);
        for (t2, w2) in gl.on_interval(0.0, t3) {
            let v2 = vi_at(d, t2);
            for (t1, w1) in gl.on_interval(0.0, t2) {
                let v1 = vi_at(d, t1);
                let nested = v1.commutator(&v2.commutator(&v3)) + v3.commutator(&v2.commutator(&v1));
                acc = acc + nested * (w1 * w2 * w3);
            }
        }
    }
    Ok((acc * C64::new(-1.0 / 6.0, 0.0)).norm())
}

pub fn magnus_terms_numeric(d: &LinearDrive, t: f64) -> Result<MagnusTerms> {
    Ok(MagnusTerms {
        beta: magnus_a1_numeric(d, t, DEFAULT_NODES)?,
        phi: magnus_a2_numeric(d, t, DEFAULT_NODES)?,
        a3_norm: magnus_a3_numeric(d, t, A3_NODES)?,
    })
}

/// Exact IP propagator. The phase never reaches a Wigner function; it is
/// reported so the two factorizations can be checked against each other.
pub fn unitary_ip(d: &LinearDrive, t: f64) -> Result<IpPropagator> {
    let omega = d.nonresonant_omega()?;
    let gamma = d.alpha().conj() * (d.g / omega);
    let nu = -gamma * C64::from_polar(1.0, omega * t);
    let phase = magnus_a2_analytic(d, t)?;
    // D(ν) D(γ) = e^{i Im(ν γ*)} D(ν + γ)
    let merge = (nu * gamma.conj()).im;
    Ok(IpPropagator { displacement: nu + gamma, phase, nu, static_displacement: gamma, split_phase: phase + merge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picture::ip_drive_shift;
    use std::f64::consts::{PI, TAU};

    fn fig2() -> LinearDrive {
        LinearDrive::new(1.0, 5.0, 1.0, -1.0, 2.0).unwrap()
    }

    #[test]
    fn vi_examples() {
        let d = fig2();
        let v0 = vi_at(&d, 0.0);
        assert!((v0.c_a - d.alpha() * 5.0).norm() < 1e-15);
        assert!((v0.c_ad - d.alpha().conj() * 5.0).norm() < 1e-15);
        let period = vi_at(&d, TAU / 3.0);
        assert!((period.c_a - v0.c_a).norm() < 1e-13 && (period.c_ad - v0.c_ad).norm() < 1e-13);
        assert!(vi_at(&d, 0.37).is_hermitian(1e-15));
    }

    #[test]
    fn commutator_is_scalar() {
        let d = fig2();
        let c = vi_at(&d, 0.2).commutator(&vi_at(&d, 0.9));
        assert_eq!(c.c_a, C64::default());
        assert_eq!(c.c_ad, C64::default());
        assert!(c.c_id.re.abs() < 1e-14);
    }

    #[test]
    fn a1_analytic_examples() {
        let d = fig2();
        assert_eq!(magnus_a1_analytic(&d, 0.0).unwrap(), C64::default());
        assert!(magnus_a1_analytic(&d, TAU / 3.0).unwrap().norm() < 1e-14);
        let half = magnus_a1_analytic(&d, PI / 3.0).unwrap();
        assert!((half - d.alpha().conj() * (2.0 * 5.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn a2_analytic_examples() {
        let d = fig2();
        assert_eq!(magnus_a2_analytic(&d, 0.0).unwrap(), 0.0);
        assert!((magnus_a2_analytic(&d, PI / 3.0).unwrap() - 25.0 * PI / 9.0).abs() < 1e-12);
        let mut prev = 0.0;
        for k in 0..200 {
            let v = magnus_a2_analytic(&d, 0.05 * k as f64).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn numeric_matches_analytic() {
        let d = fig2();
        let t = 0.7;
        let a1 = magnus_a1_numeric(&d, t, 64).unwrap();
        assert!((a1 - magnus_a1_analytic(&d, t).unwrap()).norm() <= 1e-10);
        let a2 = magnus_a2_numeric(&d, t, 64).unwrap();
        assert!((a2 - magnus_a2_analytic(&d, t).unwrap()).abs() <= 1e-10);
        assert!(magnus_a3_numeric(&d, t, A3_NODES).unwrap() <= 1e-12);
    }

    #[test]
    fn too_few_nodes() {
        assert!(magnus_a1_numeric(&fig2(), 1.0, 1).is_err());
    }

    #[test]
    fn propagator_examples() {
        let d = fig2();
        let u0 = unitary_ip(&d, 0.0).unwrap();
        assert!(u0.displacement.norm() < 1e-15);
        assert!(u0.split_phase.abs() < 1e-15);
        let closed = unitary_ip(&d, TAU / 3.0).unwrap();
        assert!(closed.displacement.norm() < 1e-14);
        // factored phase carries the 2 sin Ωt merge term
        let t = 0.45;
        let u = unitary_ip(&d, t).unwrap();
        let k = 25.0 * d.alpha().norm_sqr() / 9.0;
        assert!((u.split_phase - k * (3.0 * t - 2.0 * (3.0 * t).sin())).abs() < 1e-12);
    }

    #[test]
    fn displacement_matches_mean_shift() {
        let d = fig2();
        for t in [0.1, 0.7, 1.9, 3.3] {
            let shift = unitary_ip(&d, t).unwrap().mean_shift();
            assert!(shift.max_abs_diff(ip_drive_shift(&d, t).unwrap()) <= 1e-12);
        }
    }

    #[test]
    fn resonant_terms() {
        let d = LinearDrive::new(1.0, 2.0, 1.0, -1.0, -1.0).unwrap();
        let analytic = magnus_terms_analytic(&d, 0.8).unwrap();
        let numeric = magnus_terms_numeric(&d, 0.8).unwrap();
        assert!((analytic.beta - numeric.beta).norm() < 1e-12);
        assert!(numeric.phi.abs() < 1e-12);
        assert!(magnus_a1_analytic(&d, 0.8).is_err());
    }
}
