//! Property tests for the phase-space invariants.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use phasespace_core::gaussian::{characteristic_value, ideal_squeezed, wigner_value};
use phasespace_core::magnus::{
    displacement_to_shift, magnus_a1_analytic, magnus_a1_numeric, magnus_a2_analytic, magnus_a2_numeric, magnus_a3_numeric,
    unitary_ip, A3_NODES, DEFAULT_NODES,
};
use phasespace_core::phase::{conjugate, rotation_matrix};
use phasespace_core::picture::{
    evolve_free_sp, evolve_linear_ip, evolve_linear_ip_resonant, evolve_linear_sp, evolve_quadratic_ip, evolve_quadratic_sp,
    glissette_residual, ip_centroid_radius_sq, ip_drive_shift, to_hip_frame, to_hip_frame_quadratic, to_hp_frame, to_sip_frame,
};
use phasespace_core::{CovarianceMatrix, DisplacementSpec, GaussianState, LinearDrive, Mat2, PhaseVector, QuadraticDrive, SqueezeSpec};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn squeezed_state() -> impl Strategy<Value = GaussianState> {
    (-3.0..3.0f64, -3.0..3.0f64, -0.7..0.7f64, -PI..PI)
        .prop_map(|(a, b, s, theta)| GaussianState::squeezed_coherent(DisplacementSpec { a, b }, SqueezeSpec { s, theta }).unwrap())
}

/// Non-resonant linear drive with |Ω| ≥ 0.5.
fn linear_drive() -> impl Strategy<Value = LinearDrive> {
    (0.2..3.0f64, 0.0..10.0f64, -1.5..1.5f64, -1.5..1.5f64, 0.5..10.0f64, any::<bool>()).prop_map(|(w0, g, a, b, big, neg)| {
        let omega = if neg { -big } else { big };
        LinearDrive::new(w0, g, a, b, omega - w0).unwrap()
    })
}

fn rotated_cov(cov: &CovarianceMatrix, theta: f64) -> CovarianceMatrix {
    CovarianceMatrix::from_mat2(conjugate(rotation_matrix(theta), cov.as_mat2())).unwrap()
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn rotations_are_proper_orthogonal(theta in -4.0 * PI..4.0 * PI) {
        let r = rotation_matrix(theta);
        prop_assert!((r.det() - 1.0).abs() < 1e-14);
        prop_assert!((r.transpose() * r).max_abs_diff(Mat2::IDENTITY) < 1e-14);
        prop_assert!(rotation_matrix(-theta).max_abs_diff(r.transpose()) < 1e-15);
    }

    #[test]
    fn rotation_conjugation_preserves_covariance(state in squeezed_state(), theta in -4.0 * PI..4.0 * PI) {
        let m = conjugate(rotation_matrix(theta), state.cov.as_mat2());
        prop_assert!((m.xp - m.px).abs() < 1e-14);
        prop_assert!(m.xx > 0.0 && m.det() > 0.0);
        prop_assert!((m.det() - state.cov.det()).abs() < 1e-13);
    }

    #[test]
    fn squeezed_states_are_pure(state in squeezed_state()) {
        prop_assert!((state.det() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn picture_consistency(s0 in squeezed_state(), d in linear_drive(), t in 0.0..4.0 * PI) {
        let sp = evolve_linear_sp(&s0, &d, t).unwrap();
        let ip = evolve_linear_ip(&s0, &d, t).unwrap();
        let rot = rotation_matrix(-d.omega0 * t);
        prop_assert!(sp.mean.max_abs_diff(rot.apply(ip.mean)) < 1e-12);
        prop_assert!(sp.cov.max_abs_diff(&rotated_cov(&s0.cov, -d.omega0 * t)) < 1e-12);
        prop_assert_eq!(ip.cov, s0.cov);
        prop_assert!((sp.det() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn centroid_circle_and_glissette(s0 in squeezed_state(), d in linear_drive(), t in 0.0..4.0 * PI) {
        let ip = evolve_linear_ip(&s0, &d, t).unwrap();
        let r2 = (ip.mean - s0.mean).norm_sq();
        prop_assert!((r2 - ip_centroid_radius_sq(&d, t).unwrap()).abs() <= 1e-10);
        prop_assert!(glissette_residual(&s0, &d, t).unwrap() <= 1e-10);
    }

    #[test]
    fn frame_round_trips(s0 in squeezed_state(), d in linear_drive(), t in 0.0..4.0 * PI) {
        let free = evolve_free_sp(&s0, d.omega0, t);
        prop_assert!(to_hp_frame(&free, d.omega0, t).max_abs_diff(&s0) < 1e-12);
        let sp = evolve_linear_sp(&s0, &d, t).unwrap();
        prop_assert!(to_hip_frame(&sp, &d, t).max_abs_diff(&s0) < 1e-12);
        let ip = evolve_linear_ip(&s0, &d, t).unwrap();
        prop_assert!(to_sip_frame(&sp, d.omega0, t).max_abs_diff(&ip) < 1e-12);
    }

    #[test]
    fn resonant_limit(mu in -3.0..3.0f64, g in 0.0..10.0f64, a in -1.5..1.5f64, b in -1.5..1.5f64) {
        let s0 = ideal_squeezed(mu, -0.35).unwrap();
        let near = LinearDrive::new(1.0, g, a, b, -1.0 + 1e-6).unwrap();
        let exact = LinearDrive::new(1.0, g, a, b, -1.0).unwrap();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            let general = evolve_linear_ip(&s0, &near, t).unwrap();
            prop_assert!(general.max_abs_diff(&evolve_linear_ip_resonant(&s0, &exact, t)) <= 1e-4);
        }
    }

    #[test]
    fn quadratic_drive_is_pure_and_rotated(s0 in squeezed_state(), kappa in -0.2..0.2f64, t in 0.0..10.0f64) {
        let q = QuadraticDrive::new(1.0, kappa).unwrap();
        let ip = evolve_quadratic_ip(&s0, &q, t);
        let sp = evolve_quadratic_sp(&s0, &q, t);
        prop_assert!((ip.det() - 0.25).abs() < 1e-12);
        prop_assert!((sp.det() - 0.25).abs() < 1e-12);
        prop_assert!(sp.cov.max_abs_diff(&rotated_cov(&ip.cov, -t)) < 1e-12);
        prop_assert!(to_hip_frame_quadratic(&sp, &q, t).max_abs_diff(&s0) < 1e-12);
    }

    #[test]
    fn magnus_third_term_vanishes(g in 0.0..10.0f64, omega in 0.5..10.0f64, t in 0.0..4.0 * PI) {
        let d = LinearDrive::new(1.0, g, 1.0, -1.0, omega - 1.0).unwrap();
        prop_assert!(magnus_a3_numeric(&d, t, A3_NODES).unwrap() <= 1e-12);
    }

    #[test]
    fn magnus_quadrature_matches_closed_form(d in linear_drive(), t in 0.0..4.0 * PI) {
        let a1 = magnus_a1_numeric(&d, t, DEFAULT_NODES).unwrap() - magnus_a1_analytic(&d, t).unwrap();
        prop_assert!(a1.norm() <= 1e-10, "A1 off by {:e}", a1.norm());
        let a2 = magnus_a2_numeric(&d, t, DEFAULT_NODES).unwrap() - magnus_a2_analytic(&d, t).unwrap();
        prop_assert!(a2.abs() <= 1e-10, "A2 off by {:e}", a2.abs());
    }

    #[test]
    fn displacement_matches_drive_shift(d in linear_drive(), t in 0.0..4.0 * PI) {
        let beta = magnus_a1_analytic(&d, t).unwrap();
        prop_assert!(displacement_to_shift(beta).max_abs_diff(ip_drive_shift(&d, t).unwrap()) <= 1e-12);
        let u = unitary_ip(&d, t).unwrap();
        prop_assert!((u.displacement - beta).norm() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn wigner_normalization_and_marginal(state in squeezed_state()) {
        let (l_max, _) = state.cov.eigenvalues();
        let half = 8.0 * l_max.sqrt();
        let n = 401;
        let h = 2.0 * half / (n - 1) as f64;
        let axis = |c: f64| (0..n).map(move |k| c - half + h * k as f64);
        let mut total = 0.0;
        let mut worst_marginal: f64 = 0.0;
        let var = state.cov.xx();
        for x in axis(state.mean.x) {
            let marginal: f64 = axis(state.mean.p).map(|p| wigner_value(&state, PhaseVector::new(x, p)).unwrap()).sum::<f64>() * h;
            let dx = x - state.mean.x;
            let expected = (-dx * dx / (2.0 * var)).exp() / (TAU * var).sqrt();
            worst_marginal = worst_marginal.max((marginal - expected).abs());
            total += marginal * h;
        }
        prop_assert!((total - 1.0).abs() < 1e-6);
        prop_assert!(worst_marginal < 1e-6);
    }

    #[test]
    fn characteristic_and_wigner_are_a_fourier_pair(state in squeezed_state(), x in -2.0..2.0f64, p in -2.0..2.0f64) {
        let r = PhaseVector::new(state.mean.x + x, state.mean.p + p);
        let inv = state.cov.inverse();
        let (xi_half, eta_half) = ((60.0 * inv.xx).sqrt(), (60.0 * inv.pp).sqrt());
        let n = 161;
        let (h_xi, h_eta) = (2.0 * xi_half / (n - 1) as f64, 2.0 * eta_half / (n - 1) as f64);
        let mut acc = C64::default();
        for i in 0..n {
            let xi = -xi_half + h_xi * i as f64;
            for j in 0..n {
                let eta = -eta_half + h_eta * j as f64;
                acc += characteristic_value(&state, xi, eta) * C64::from_polar(1.0, -(xi * r.x + eta * r.p));
            }
        }
        let w = acc.re * h_xi * h_eta / (4.0 * PI * PI);
        prop_assert!((w - wigner_value(&state, r).unwrap()).abs() < 1e-4);
    }
}

#[test]
fn characteristic_is_bounded() {
    let state = ideal_squeezed(1.0, -0.35).unwrap();
    for i in 0..21 {
        for j in 0..21 {
            let (xi, eta) = (-3.0 + 0.3 * i as f64, -3.0 + 0.3 * j as f64);
            assert!(characteristic_value(&state, xi, eta).norm() <= 1.0 + 1e-15);
        }
    }
}
