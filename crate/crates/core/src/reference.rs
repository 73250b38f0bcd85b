//! Manufactured harmonic field and the closed-form unit-sphere kernels.

use std::sync::Arc;

use crate::geometry::SurfaceDomain;
use crate::potentials::DensityPair;
use crate::vec3::Vec3;

/// `u(x) = e^{x₃}(sin x₁ + sin x₂)`, harmonic in all of ℝ³.
pub fn exact_solution(x: Vec3) -> f64 {
    x[2].exp() * (x[0].sin() + x[1].sin())
}

pub fn exact_gradient(x: Vec3) -> Vec3 {
    let e = x[2].exp();
    Vec3::new(e * x[0].cos(), e * x[1].cos(), e * (x[0].sin() + x[1].sin()))
}

/// Boundary trace `μ = u|_B` and normal derivative `ρ = ∂ₙu` of the exact field.
pub fn densities_from_exact(domain: &SurfaceDomain) -> DensityPair {
    let d_mu = *domain;
    let d_rho = *domain;
    DensityPair::new(
        Arc::new(move |theta, phi| exact_solution(d_mu.parameterize(theta, phi))),
        Arc::new(move |theta, phi| {
            let f = d_rho.frame_unchecked(theta, phi);
            f.normal.dot(&exact_gradient(f.position))
        }),
    )
}

/// Closed forms on the unit sphere with `x = (0, 0, 1 − ε)`:
///
/// `K(s) sin s = (2ε − ε²) sin s [2(1 − ε)(1 − cos s) + ε²]^{−3/2}`
/// `G(s) sin s = sin s [2(1 − ε)(1 − cos s) + ε²]^{−1/2}`
pub fn sphere_kernel_oracles(s: f64, eps: f64) -> (f64, f64) {
    let base = 2.0 * (1.0 - eps) * (1.0 - s.cos()) + eps * eps;
    let sin_s = s.sin();
    let k = (2.0 * eps - eps * eps) * sin_s * base.powf(-1.5);
    let g = sin_s / base.sqrt();
    (k, g)
}
