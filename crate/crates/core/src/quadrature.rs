//! Gauss-Legendre rules and the spherical product rule in a rotated frame.
//!
//! The polar variable is integrated directly in `s ∈ (0, π)` through the
//! affine map `s = π(z + 1)/2` of the Gauss-Legendre abscissas, and the
//! azimuth with a `2N`-point periodic trapezoid rule.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::rotation::RotationFrame;

pub const MAX_ORDER: usize = 2048;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Nodes (ascending) and weights of the `n`-point Gauss-Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidOrder(n));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    // roots are symmetric; solve for the positive half and mirror
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// `P_n(z)` and `P_n'(z)` from the three-term recurrence.
fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

/// Tensor rule: `N` mapped Gauss-Legendre polar nodes and `2N` azimuthal nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductRule {
    pub n: usize,
    /// `sᵢ = π(zᵢ + 1)/2`, strictly inside `(0, π)`.
    pub polar_nodes: Vec<f64>,
    /// Gauss-Legendre weights on `[−1, 1]` (the `π/2` map factor lives in the prefactor).
    pub polar_weights: Vec<f64>,
    /// `tⱼ = −π + π(j − 1)/N`, `j = 1..2N`.
    pub azimuth_nodes: Vec<f64>,
}

impl ProductRule {
    pub fn new(n: usize) -> Result<Self> {
        let (z, polar_weights) = gauss_legendre(n)?;
        let polar_nodes = z.iter().map(|zi| PI * (zi + 1.0) / 2.0).collect();
        let azimuth_nodes = (0..2 * n).map(|j| -PI + PI * j as f64 / n as f64).collect();
        Ok(ProductRule { n, polar_nodes, polar_weights, azimuth_nodes })
    }

    /// Shared rule for order `n`, built once per process.
    pub fn cached(n: usize) -> Result<Arc<ProductRule>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ProductRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&n) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(ProductRule::new(n)?);
        let mut guard = cache.lock().expect("rule cache poisoned");
        Ok(Arc::clone(guard.entry(n).or_insert(rule)))
    }

    /// The constant `π/(8N)` multiplying every node contribution.
    pub fn prefactor(&self) -> f64 {
        PI / (8.0 * self.n as f64)
    }

    /// Visits every node of the rotated grid as `(weight, θ, φ)`, where
    /// `weight = π/(8N) · wᵢ sin(sᵢ)` already includes all quadrature factors.
    pub fn for_each_rotated_node<F: FnMut(f64, f64, f64)>(&self, theta_star: f64, phi_star: f64, mut visit: F) {
        let frame = RotationFrame::new(theta_star, phi_star);
        let pre = self.prefactor();
        for (s, w) in self.polar_nodes.iter().zip(&self.polar_weights) {
            let weight = pre * w * s.sin();
            for t in &self.azimuth_nodes {
                let (theta, phi) = frame.rotated_angles(*s, *t);
                visit(weight, theta, phi);
            }
        }
    }
}

pub fn product_rule(n: usize) -> Result<ProductRule> {
    ProductRule::new(n)
}

/// `(π/8N) Σᵢ Σⱼ wᵢ sin(sᵢ) f(θ(sᵢ, tⱼ), φ(sᵢ, tⱼ))`, i.e. the normalized
/// surface mean `(1/4π) ∫∫ f sinθ dθ dφ`, sampled in the frame centred at `(θ*, φ*)`.
pub fn integrate_rotated<F>(rule: &ProductRule, theta_star: f64, phi_star: f64, f: F) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let mut total = 0.0;
    rule.for_each_rotated_node(theta_star, phi_star, |w, theta, phi| total += w * f(theta, phi));
    total
}

/// Fallible variant of [`integrate_rotated`]; stops at the first error.
pub fn try_integrate_rotated<F, E>(rule: &ProductRule, theta_star: f64, phi_star: f64, f: F) -> std::result::Result<f64, E>
where
    F: Fn(f64, f64) -> std::result::Result<f64, E>,
{
    let frame = RotationFrame::new(theta_star, phi_star);
    let pre = rule.prefactor();
    let mut total = 0.0;
    for (s, w) in rule.polar_nodes.iter().zip(&rule.polar_weights) {
        let weight = pre * w * s.sin();
        for t in &rule.azimuth_nodes {
            let (theta, phi) = frame.rotated_angles(*s, *t);
            total += weight * f(theta, phi)?;
        }
    }
    Ok(total)
}
