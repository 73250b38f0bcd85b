use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use layerpot_core::{
    densities_from_exact, exact_solution, gauss_law_check, integrate_rotated, rotated_angles, Approximation,
    DensityPair, ProductRule, ProfileKind, SurfaceDomain, Target, Vec3,
};

#[test]
fn exp_cos_mean_converges_in_every_frame() {
    // (1/4π)∫ e^{cos θ} dσ = sinh(1)
    let exact = 1f64.sinh();
    for (ts, ps) in [(0.0, 0.0), (0.9, 2.0), (2.5, -1.0)] {
        let coarse = (integrate_rotated(&ProductRule::new(4).unwrap(), ts, ps, |t, _| t.cos().exp()) - exact).abs();
        let fine = (integrate_rotated(&ProductRule::new(16).unwrap(), ts, ps, |t, _| t.cos().exp()) - exact).abs();
        assert!(fine < 1e-13, "frame ({ts}, {ps}): {fine}");
        assert!(fine <= coarse);
    }
}

#[test]
fn gauss_law_inside_on_and_outside() {
    let rule = ProductRule::new(64).unwrap();
    for kind in ProfileKind::ALL {
        let d = SurfaceDomain::new(kind);
        assert_abs_diff_eq!(gauss_law_check(&d, Vec3::new(0.0, 0.0, 0.05), &rule, None), -1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(gauss_law_check(&d, Vec3::new(0.0, 0.0, 4.0), &rule, None), 0.0, epsilon = 1e-8);
    }
}

#[test]
fn approximations_agree_at_moderate_distance() {
    let rule = ProductRule::new(96).unwrap();
    for kind in ProfileKind::ALL {
        let d = SurfaceDomain::new(kind);
        let dens = densities_from_exact(&d);
        let target = Target::on_domain(&d, 1.2, 0.7, 0.1).unwrap();
        let exact = exact_solution(target.x);
        let u1 = Approximation::Plain.evaluate(&d, &dens, &target, &rule).unwrap();
        let u2 = Approximation::Subtracted.evaluate(&d, &dens, &target, &rule).unwrap();
        // the naive grid is under-resolved at ε = 0.1 on the larger mushroom
        let tol1 = if kind == ProfileKind::Mushroom { 1e-2 } else { 1e-4 };
        assert!((u1 - exact).abs() < tol1, "{kind}: {}", (u1 - exact).abs());
        assert!((u2 - exact).abs() < 1e-7, "{kind}: {}", (u2 - exact).abs());
    }
}

#[test]
fn approx2_error_is_first_order_once_unresolved() {
    // Below the resolution threshold of N = 128 the error decays linearly in ε.
    let d = SurfaceDomain::peanut();
    let dens = densities_from_exact(&d);
    let rule = ProductRule::new(128).unwrap();
    let (ts, ps) = d.inverse_parameterize(Vec3::new(-0.0894, 0.4040, 0.0)).unwrap();
    let err = |eps: f64| {
        let t = Target::on_domain(&d, ts, ps, eps).unwrap();
        (Approximation::Subtracted.evaluate(&d, &dens, &t, &rule).unwrap() - exact_solution(t.x)).abs()
    };
    let eps: Vec<f64> = (0..9).map(|k| 10f64.powf(-6.0 + 0.125 * k as f64)).collect();
    let errs: Vec<f64> = eps.iter().map(|&e| err(e)).collect();
    let slope = layerpot_core::harness::fit_slope(&eps, &errs, 1e-13).unwrap();
    assert!((0.8..=1.2).contains(&slope), "slope {slope}");
}

#[test]
fn approx3_equals_approx2_without_neumann_data() {
    let d = SurfaceDomain::mushroom();
    let mu = densities_from_exact(&d);
    let dens = DensityPair::from_fns(move |t, p| mu.mu(t, p), |_, _| 0.0);
    let rule = ProductRule::new(48).unwrap();
    for eps in [1e-1, 1e-3, 1e-6] {
        let t = Target::on_domain(&d, 2.0, -2.0, eps).unwrap();
        let u2 = Approximation::Subtracted.evaluate(&d, &dens, &t, &rule).unwrap();
        let u3 = Approximation::Expanded.evaluate(&d, &dens, &t, &rule).unwrap();
        assert_eq!(u2.to_bits(), u3.to_bits());
    }
}

#[test]
fn linearity_in_densities() {
    let d = SurfaceDomain::peanut();
    let dens = densities_from_exact(&d);
    let rule = ProductRule::new(32).unwrap();
    let t = Target::on_domain(&d, 0.8, 0.3, 1e-2).unwrap();
    for approx in [Approximation::Plain, Approximation::Subtracted, Approximation::Expanded] {
        let u = approx.evaluate(&d, &dens, &t, &rule).unwrap();
        let v = approx.evaluate(&d, &dens.scaled(-3.0), &t, &rule).unwrap();
        assert_abs_diff_eq!(v, -3.0 * u, epsilon = 1e-12 * u.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotated_integral_is_frame_independent(ts in 0.0..PI, ps in -PI..PI) {
        let rule = ProductRule::new(32).unwrap();
        let f = |t: f64, p: f64| (t.sin() * p.cos()).exp() + (t.cos() * 2.0).sin();
        let base = integrate_rotated(&rule, 0.0, 0.0, f);
        prop_assert!((integrate_rotated(&rule, ts, ps, f) - base).abs() < 1e-10);
    }

    #[test]
    fn pole_maps_to_centre(ts in 1e-3..PI - 1e-3, ps in -PI..PI, t in -PI..PI) {
        let (th, ph) = rotated_angles(0.0, t, ts, ps);
        prop_assert!((th - ts).abs() < 1e-13 && (ph - ps).abs() < 1e-13);
    }

    #[test]
    fn subtraction_reproduces_constants(theta in 0.2..2.9f64, phi in -PI..PI, log_eps in -8.0..-1.0f64, c in -5.0..5.0f64) {
        let d = SurfaceDomain::mushroom();
        let rule = ProductRule::cached(16).unwrap();
        let t = Target::on_domain(&d, theta, phi, 10f64.powf(log_eps)).unwrap();
        let u = Approximation::Subtracted.evaluate(&d, &DensityPair::constant(c), &t, &rule).unwrap();
        prop_assert_eq!(u, c);
    }
}
