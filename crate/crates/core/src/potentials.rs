//! Double- and single-layer kernels and the three discretizations of the
//! interior representation formula at a close evaluation point.
//!
//! All three evaluators use the rotated product rule. They differ in what is
//! integrated:
//!
//! 1. the representation formula as is,
//! 2. the formula with the double layer written against `μ(y) − μ(y*)`,
//! 3. as 2, with the single layer replaced by its first-order expansion in
//!    `ε` about the boundary point.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{evaluation_point, SurfaceDomain, SurfacePoint};
use crate::quadrature::ProductRule;
use crate::vec3::Vec3;

const COINCIDENT: f64 = 1e-300;

pub type ScalarField = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Dirichlet density `μ` and Neumann density `ρ` as functions of `(θ, φ)`.
#[derive(Clone)]
pub struct DensityPair {
    mu: ScalarField,
    rho: ScalarField,
}

impl DensityPair {
    pub fn new(mu: ScalarField, rho: ScalarField) -> Self {
        DensityPair { mu, rho }
    }

    pub fn from_fns<M, R>(mu: M, rho: R) -> Self
    where
        M: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        R: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        DensityPair { mu: Arc::new(mu), rho: Arc::new(rho) }
    }

    /// `μ ≡ c`, `ρ ≡ 0`.
    pub fn constant(c: f64) -> Self {
        Self::from_fns(move |_, _| c, |_, _| 0.0)
    }

    pub fn zero() -> Self {
        Self::from_fns(|_, _| 0.0, |_, _| 0.0)
    }

    #[inline]
    pub fn mu(&self, theta: f64, phi: f64) -> f64 {
        (self.mu)(theta, phi)
    }

    #[inline]
    pub fn rho(&self, theta: f64, phi: f64) -> f64 {
        (self.rho)(theta, phi)
    }

    /// Both densities multiplied by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let (mu, rho) = (Arc::clone(&self.mu), Arc::clone(&self.rho));
        Self::from_fns(move |t, p| alpha * mu(t, p), move |t, p| alpha * rho(t, p))
    }
}

impl fmt::Debug for DensityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DensityPair { .. }")
    }
}

/// Close evaluation target `x = y* − ε ℓ n*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub ystar: SurfacePoint,
    pub eps: f64,
    pub ell: f64,
    pub x: Vec3,
}

impl Target {
    pub fn new(ystar: SurfacePoint, eps: f64, ell: f64) -> Self {
        Target { ystar, eps, ell, x: evaluation_point(&ystar, eps, ell) }
    }

    /// Target above the boundary point at `(θ*, φ*)` of `domain`.
    pub fn on_domain(domain: &SurfaceDomain, theta_star: f64, phi_star: f64, eps: f64) -> Result<Self> {
        let ystar = domain.surface_frame(theta_star, phi_star)?;
        Ok(Self::new(ystar, eps, domain.ell))
    }
}

/// `n_y · (x − y) / |x − y|³`
#[inline]
pub fn dlp_kernel(y: Vec3, n_y: Vec3, x: Vec3) -> Result<f64> {
    let d = x - y;
    let r = d.norm();
    if r < COINCIDENT {
        return Err(Error::CoincidentPoints { distance: r });
    }
    Ok(n_y.dot(&d) / (r * r * r))
}

/// `1 / |x − y|`
#[inline]
pub fn slp_kernel(y: Vec3, x: Vec3) -> Result<f64> {
    let r = (x - y).norm();
    if r < COINCIDENT {
        return Err(Error::CoincidentPoints { distance: r });
    }
    Ok(1.0 / r)
}

/// Assembled unit-sphere integrands at rotated coordinates `(s, t)` for
/// `x = (0, 0, 1 − ε)`, each multiplied by `J sin s`.
///
/// The first value is the Poisson kernel `(1 − |x|²)/|x − y|³`, which on the
/// unit sphere equals `−2·dlp − slp`; the second is the single-layer kernel.
pub fn unit_sphere_integrands(s: f64, t: f64, eps: f64) -> Result<(f64, f64)> {
    let sphere = SurfaceDomain::sphere();
    let y = sphere.frame_unchecked(s, t);
    let x = Vec3::new(0.0, 0.0, 1.0 - eps);
    let dlp = dlp_kernel(y.position, y.normal, x)?;
    let slp = slp_kernel(y.position, x)?;
    let weight = y.jacobian * s.sin();
    Ok(((-2.0 * dlp - slp) * weight, slp * weight))
}

/// One boundary node of a rotated product rule.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryNode {
    /// `π/(8N) · wᵢ sin sᵢ · J`: quadrature weight times surface Jacobian.
    pub weight: f64,
    pub position: Vec3,
    pub normal: Vec3,
    pub mu: f64,
    pub rho: f64,
}

/// Boundary data sampled on the product grid rotated to `(θ*, φ*)`.
///
/// Independent of `ε`, so one set of samples serves a whole sweep.
#[derive(Debug, Clone)]
pub struct BoundarySamples {
    pub theta_star: f64,
    pub phi_star: f64,
    pub nodes: Vec<BoundaryNode>,
}

impl BoundarySamples {
    pub fn new(domain: &SurfaceDomain, densities: &DensityPair, rule: &ProductRule, theta_star: f64, phi_star: f64) -> Self {
        let mut nodes = Vec::with_capacity(rule.polar_nodes.len() * rule.azimuth_nodes.len());
        rule.for_each_rotated_node(theta_star, phi_star, |w, theta, phi| {
            let f = domain.frame_unchecked(theta, phi);
            nodes.push(BoundaryNode {
                weight: w * f.jacobian,
                position: f.position,
                normal: f.normal,
                mu: densities.mu(theta, phi),
                rho: densities.rho(theta, phi),
            });
        });
        BoundarySamples { theta_star, phi_star, nodes }
    }

    /// Representation formula without subtraction.
    pub fn approx1(&self, x: Vec3) -> Result<f64> {
        let mut total = 0.0;
        for node in &self.nodes {
            let k = dlp_kernel(node.position, node.normal, x)?;
            let g = slp_kernel(node.position, x)?;
            total += node.weight * (-k * node.mu + g * node.rho);
        }
        Ok(total)
    }

    /// Subtracted double layer plus the single layer at `x`.
    pub fn approx2(&self, target: &Target, mu_star: f64) -> Result<f64> {
        let x = target.x;
        let mut total = 0.0;
        for node in &self.nodes {
            let k = dlp_kernel(node.position, node.normal, x)?;
            let g = slp_kernel(node.position, x)?;
            let term = -k * (node.mu - mu_star) + g * node.rho;
            total += node.weight * term;
        }
        Ok(mu_star + total)
    }

    /// Subtracted double layer plus the first-order expansion of the single layer.
    pub fn approx3(&self, target: &Target, mu_star: f64, rho_star: f64) -> Result<f64> {
        let x = target.x;
        let ystar = target.ystar.position;
        let nstar = target.ystar.normal;
        let offset = target.eps * target.ell;
        let mut total = 0.0;
        for node in &self.nodes {
            let k = dlp_kernel(node.position, node.normal, x)?;
            let g0 = slp_kernel(node.position, ystar)?;
            let k0 = dlp_kernel(node.position, nstar, ystar)?;
            let term = -k * (node.mu - mu_star) + g0 * node.rho + offset * k0 * node.rho;
            total += node.weight * term;
        }
        Ok(mu_star - 0.5 * offset * rho_star + total)
    }

    /// `(1/4π) ∫ dlp_kernel dσ`, the double layer of unit density.
    pub fn unit_double_layer(&self, x: Vec3) -> f64 {
        self.nodes
            .iter()
            .map(|node| {
                let d = x - node.position;
                let r = d.norm();
                node.weight * node.normal.dot(&d) / (r * r * r)
            })
            .sum()
    }
}

/// The three discretizations of the representation formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Approximation {
    /// Representation formula as is; O(1) error at close points.
    Plain,
    /// Subtracted double layer; O(ε).
    Subtracted,
    /// Subtracted double layer and expanded single layer; O(ε²).
    Expanded,
}

impl Approximation {
    pub const ALL: [Approximation; 3] = [Approximation::Plain, Approximation::Subtracted, Approximation::Expanded];

    pub fn index(&self) -> u8 {
        match self {
            Approximation::Plain => 1,
            Approximation::Subtracted => 2,
            Approximation::Expanded => 3,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Approximation::Plain),
            2 => Ok(Approximation::Subtracted),
            3 => Ok(Approximation::Expanded),
            other => Err(Error::InvalidConfig(format!("approximation must be 1, 2 or 3, got {other}"))),
        }
    }

    /// Centre of the product grid used for this approximation: the plain
    /// formula is evaluated naively on the unrotated parameter grid, the
    /// corrected ones in the frame of the target's boundary point.
    pub fn frame_for(&self, target: &Target) -> (f64, f64) {
        match self {
            Approximation::Plain => (0.0, 0.0),
            _ => (target.ystar.theta, target.ystar.phi),
        }
    }

    /// Evaluates at `target` using boundary data sampled on the grid centred
    /// at [`Approximation::frame_for`].
    pub fn evaluate_samples(&self, samples: &BoundarySamples, densities: &DensityPair, target: &Target) -> Result<f64> {
        let (ts, ps) = (target.ystar.theta, target.ystar.phi);
        match self {
            Approximation::Plain => samples.approx1(target.x),
            Approximation::Subtracted => samples.approx2(target, densities.mu(ts, ps)),
            Approximation::Expanded => samples.approx3(target, densities.mu(ts, ps), densities.rho(ts, ps)),
        }
    }

    pub fn evaluate(&self, domain: &SurfaceDomain, densities: &DensityPair, target: &Target, rule: &ProductRule) -> Result<f64> {
        match self {
            Approximation::Plain => evaluate_approx1(domain, densities, target.x, rule, self.frame_for(target)),
            Approximation::Subtracted => evaluate_approx2(domain, densities, target, rule),
            Approximation::Expanded => evaluate_approx3(domain, densities, target, rule),
        }
    }
}

impl fmt::Display for Approximation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl FromStr for Approximation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let i: u8 = s.trim().parse().map_err(|_| Error::InvalidConfig(format!("invalid approximation '{s}'")))?;
        Self::from_index(i)
    }
}

/// Plain representation formula at `x`, integrated in the frame centred at
/// `frame_angles`. Passing `(0, 0)` gives the unrotated grid.
pub fn evaluate_approx1(
    domain: &SurfaceDomain,
    densities: &DensityPair,
    x: Vec3,
    rule: &ProductRule,
    frame_angles: (f64, f64),
) -> Result<f64> {
    BoundarySamples::new(domain, densities, rule, frame_angles.0, frame_angles.1).approx1(x)
}

pub fn evaluate_approx2(domain: &SurfaceDomain, densities: &DensityPair, target: &Target, rule: &ProductRule) -> Result<f64> {
    let (ts, ps) = (target.ystar.theta, target.ystar.phi);
    BoundarySamples::new(domain, densities, rule, ts, ps).approx2(target, densities.mu(ts, ps))
}

/// Meaningful only for small `ε`: away from the boundary the neglected
/// second-order term of the single-layer expansion dominates.
pub fn evaluate_approx3(domain: &SurfaceDomain, densities: &DensityPair, target: &Target, rule: &ProductRule) -> Result<f64> {
    let (ts, ps) = (target.ystar.theta, target.ystar.phi);
    BoundarySamples::new(domain, densities, rule, ts, ps).approx3(target, densities.mu(ts, ps), densities.rho(ts, ps))
}

/// Double layer of unit density at `x`: −1 inside, 0 outside.
///
/// `frame` selects the rotated grid; use the closest boundary point's angles
/// for points near the surface.
pub fn gauss_law_check(domain: &SurfaceDomain, x: Vec3, rule: &ProductRule, frame: Option<(f64, f64)>) -> f64 {
    let (ts, ps) = frame.unwrap_or((0.0, 0.0));
    BoundarySamples::new(domain, &DensityPair::zero(), rule, ts, ps).unit_double_layer(x)
}
