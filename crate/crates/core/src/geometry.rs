//! Benchmark surfaces given by a radial profile over the parameter sphere.
//!
//! Every surface is `y(θ, φ) = r(θ) · (a₁ sinθ cosφ, a₂ sinθ sinφ, a₃ cosθ)`
//! with `a` the per-axis scale. All three domains are star-shaped about the
//! origin, which fixes the outward normal orientation and gives a cheap
//! inside/outside test.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Tolerance for accepting a Cartesian point as lying on the surface.
///
/// Published test-point coordinates carry four decimals.
pub const ON_SURFACE_TOLERANCE: f64 = 1e-3;

const SCAN_POLAR: usize = 64;
const SCAN_AZIMUTH: usize = 128;
const NEWTON_GRADIENT_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Sphere,
    Peanut,
    Mushroom,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 3] = [ProfileKind::Sphere, ProfileKind::Peanut, ProfileKind::Mushroom];

    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Sphere => "sphere",
            ProfileKind::Peanut => "peanut",
            ProfileKind::Mushroom => "mushroom",
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sphere" => Ok(ProfileKind::Sphere),
            "peanut" => Ok(ProfileKind::Peanut),
            "mushroom" => Ok(ProfileKind::Mushroom),
            other => Err(Error::InvalidConfig(format!("unknown domain '{other}'"))),
        }
    }
}

/// A closed analytic surface described by a radial profile `r(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceDomain {
    pub profile_kind: ProfileKind,
    pub axis_scale: Vec3,
    /// Characteristic length used to scale the normal offset of close points.
    pub ell: f64,
}

/// A sample of the boundary together with its local frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub theta: f64,
    pub phi: f64,
    pub position: Vec3,
    /// Outward unit normal.
    pub normal: Vec3,
    /// Surface measure factor: `dσ = J sinθ dθ dφ`.
    pub jacobian: f64,
}

/// First and second parametric derivatives of `y(θ, φ)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Derivatives {
    pub position: Vec3,
    pub d_theta: Vec3,
    pub d_phi: Vec3,
    pub d_theta_theta: Vec3,
    pub d_theta_phi: Vec3,
    pub d_phi_phi: Vec3,
}

impl SurfaceDomain {
    pub fn new(profile_kind: ProfileKind) -> Self {
        let axis_scale = match profile_kind {
            ProfileKind::Sphere => Vec3::new(1.0, 1.0, 1.0),
            ProfileKind::Peanut | ProfileKind::Mushroom => Vec3::new(1.0, 2.0, 1.0),
        };
        SurfaceDomain { profile_kind, axis_scale, ell: 1.0 }
    }

    pub fn sphere() -> Self {
        Self::new(ProfileKind::Sphere)
    }

    pub fn peanut() -> Self {
        Self::new(ProfileKind::Peanut)
    }

    pub fn mushroom() -> Self {
        Self::new(ProfileKind::Mushroom)
    }

    pub fn name(&self) -> &'static str {
        self.profile_kind.name()
    }

    /// Returns `(r(θ), r'(θ))`.
    pub fn radial_profile(&self, theta: f64) -> (f64, f64) {
        let (r, dr, _) = self.profile_derivatives(theta);
        (r, dr)
    }

    /// Returns `(r, r', r'')` from hand-differentiated closed forms.
    pub fn profile_derivatives(&self, theta: f64) -> (f64, f64, f64) {
        match self.profile_kind {
            ProfileKind::Sphere => (1.0, 0.0, 0.0),
            ProfileKind::Peanut => {
                // r² = g = cos2θ + √h,  h = 1.1 − sin²2θ
                let (s2, c2) = (2.0 * theta).sin_cos();
                let (s4, c4) = (4.0 * theta).sin_cos();
                let h = 1.1 - s2 * s2;
                let sqrt_h = h.sqrt();
                let g = c2 + sqrt_h;
                let dg = -2.0 * s2 - s4 / sqrt_h;
                let ddg = -4.0 * c2 - 4.0 * c4 / sqrt_h - s4 * s4 / (h * sqrt_h);
                let r = g.sqrt();
                let dr = dg / (2.0 * r);
                let ddr = (ddg - 2.0 * dr * dr) / (2.0 * r);
                (r, dr, ddr)
            }
            ProfileKind::Mushroom => {
                // r = 2 − 1/D,  D = 1 + 100(1 − cosθ)
                let (s, c) = theta.sin_cos();
                let d = 1.0 + 100.0 * (1.0 - c);
                let dd = 100.0 * s;
                let ddd = 100.0 * c;
                let r = 2.0 - 1.0 / d;
                let dr = dd / (d * d);
                let ddr = ddd / (d * d) - 2.0 * dd * dd / (d * d * d);
                (r, dr, ddr)
            }
        }
    }

    pub fn parameterize(&self, theta: f64, phi: f64) -> Vec3 {
        let (r, _) = self.radial_profile(theta);
        unit_direction(theta, phi).hadamard(&self.axis_scale) * r
    }

    pub(crate) fn derivatives(&self, theta: f64, phi: f64) -> Derivatives {
        let (r, dr, ddr) = self.profile_derivatives(theta);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let a = &self.axis_scale;
        let w = Vec3::new(st * cp, st * sp, ct).hadamard(a);
        let w_t = Vec3::new(ct * cp, ct * sp, -st).hadamard(a);
        let w_p = Vec3::new(-st * sp, st * cp, 0.0).hadamard(a);
        let w_tt = -w;
        let w_tp = Vec3::new(-ct * sp, ct * cp, 0.0).hadamard(a);
        let w_pp = Vec3::new(-st * cp, -st * sp, 0.0).hadamard(a);
        Derivatives {
            position: w * r,
            d_theta: w * dr + w_t * r,
            d_phi: w_p * r,
            d_theta_theta: w * ddr + w_t * (2.0 * dr) + w_tt * r,
            d_theta_phi: w_p * dr + w_tp * r,
            d_phi_phi: w_pp * r,
        }
    }

    /// Position, outward normal and Jacobian factor at `(θ, φ)`.
    ///
    /// Fails at the poles, where the parameterization degenerates.
    pub fn surface_frame(&self, theta: f64, phi: f64) -> Result<SurfacePoint> {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::DegeneratePole { theta });
        }
        Ok(self.frame_unchecked(theta, phi))
    }

    /// Frame evaluation without the pole check. The Jacobian uses `∂φy / sinθ`,
    /// which stays finite as θ approaches a pole.
    pub(crate) fn frame_unchecked(&self, theta: f64, phi: f64) -> SurfacePoint {
        let (r, dr) = self.radial_profile(theta);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let a = &self.axis_scale;
        let w = Vec3::new(st * cp, st * sp, ct).hadamard(a);
        let w_t = Vec3::new(ct * cp, ct * sp, -st).hadamard(a);
        let position = w * r;
        let d_theta = w * dr + w_t * r;
        let d_phi_reduced = Vec3::new(-sp, cp, 0.0).hadamard(a) * r;
        let cross = d_theta.cross(&d_phi_reduced);
        let jacobian = cross.norm();
        let mut normal = cross * (1.0 / jacobian);
        if normal.dot(&position) < 0.0 {
            normal = -normal;
        }
        SurfacePoint { theta, phi, position, normal, jacobian }
    }

    /// Recovers `(θ, φ)` of a Cartesian point lying on the surface.
    pub fn inverse_parameterize(&self, p: Vec3) -> Result<(f64, f64)> {
        self.inverse_parameterize_with_tolerance(p, ON_SURFACE_TOLERANCE)
    }

    pub fn inverse_parameterize_with_tolerance(&self, p: Vec3, tolerance: f64) -> Result<(f64, f64)> {
        let (theta, phi, residual) = self.surface_parameters(p);
        if !(residual <= tolerance) {
            return Err(Error::OffSurface { residual, tolerance });
        }
        Ok((theta, phi))
    }

    /// Radial projection onto the surface: `(θ, φ, |y(θ, φ) − p|)`.
    pub fn surface_parameters(&self, p: Vec3) -> (f64, f64, f64) {
        let (theta, phi, _) = self.descaled_spherical(p);
        let residual = (self.parameterize(theta, phi) - p).norm();
        (theta, phi, residual)
    }

    fn descaled_spherical(&self, p: Vec3) -> (f64, f64, f64) {
        let a = &self.axis_scale;
        let q = Vec3::new(p[0] / a[0], p[1] / a[1], p[2] / a[2]);
        let rho = q.norm();
        if rho == 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let theta = (q[2] / rho).clamp(-1.0, 1.0).acos();
        let phi = if q[0] == 0.0 && q[1] == 0.0 { 0.0 } else { q[1].atan2(q[0]) };
        (theta, phi, rho)
    }

    /// `r(θ_x) − |x̃|` in descaled coordinates: positive inside, negative outside.
    pub fn interior_margin(&self, x: Vec3) -> f64 {
        let (theta, _, rho) = self.descaled_spherical(x);
        self.radial_profile(theta).0 - rho
    }

    pub fn contains(&self, x: Vec3) -> bool {
        self.interior_margin(x) > 1e-12
    }

    /// Half-width of the axis-aligned bounding box along `axis`.
    pub fn extent(&self, axis: usize) -> f64 {
        let samples = 4001;
        let mut best = 0.0f64;
        for i in 0..samples {
            let theta = PI * i as f64 / (samples - 1) as f64;
            let (r, _) = self.radial_profile(theta);
            let (st, ct) = theta.sin_cos();
            let v = if axis == 2 { ct.abs() } else { st };
            best = best.max(r * v * self.axis_scale[axis]);
        }
        best
    }

    /// Nearest boundary point to an interior `x`, and the scaled distance `ε`.
    ///
    /// A 64×128 parameter-grid scan seeds a damped Newton iteration on
    /// `|x − y(θ, φ)|²`. If Newton fails to converge the grid minimum is
    /// returned.
    pub fn closest_boundary_point(&self, x: Vec3) -> Result<(SurfacePoint, f64)> {
        if !self.contains(x) {
            return Err(Error::NotInterior { x: x[0], y: x[1], z: x[2] });
        }

        let mut seed = (0.0, 0.0);
        let mut best = f64::INFINITY;
        for i in 0..SCAN_POLAR {
            let theta = PI * (i as f64 + 0.5) / SCAN_POLAR as f64;
            for j in 0..SCAN_AZIMUTH {
                let phi = -PI + 2.0 * PI * j as f64 / SCAN_AZIMUTH as f64;
                let diff = x - self.parameterize(theta, phi);
                let d = diff.dot(&diff);
                // strict improvement beyond rounding keeps the earliest scan entry on ties
                if d < best * (1.0 - 1e-13) {
                    best = d;
                    seed = (theta, phi);
                }
            }
        }

        let (theta, phi) = self.newton_projection(x, seed).unwrap_or(seed);
        let ystar = self.frame_unchecked(theta, phi);
        let eps = (x - ystar.position).norm() / self.ell;
        Ok((ystar, eps))
    }

    fn newton_projection(&self, x: Vec3, seed: (f64, f64)) -> Option<(f64, f64)> {
        let objective = |theta: f64, phi: f64| {
            let d = x - self.parameterize(theta, phi);
            d.dot(&d)
        };
        let (mut theta, mut phi) = seed;
        let mut value = objective(theta, phi);

        for _ in 0..NEWTON_MAX_ITER {
            let dv = self.derivatives(theta, phi);
            let diff = x - dv.position;
            let g = [-2.0 * diff.dot(&dv.d_theta), -2.0 * diff.dot(&dv.d_phi)];
            if g[0].abs().max(g[1].abs()) < NEWTON_GRADIENT_TOL {
                return Some((theta, phi));
            }
            let h00 = 2.0 * (dv.d_theta.dot(&dv.d_theta) - diff.dot(&dv.d_theta_theta));
            let h01 = 2.0 * (dv.d_theta.dot(&dv.d_phi) - diff.dot(&dv.d_theta_phi));
            let h11 = 2.0 * (dv.d_phi.dot(&dv.d_phi) - diff.dot(&dv.d_phi_phi));
            let det = h00 * h11 - h01 * h01;
            let step = if h00 > 0.0 && det > 0.0 {
                [-(h11 * g[0] - h01 * g[1]) / det, -(h00 * g[1] - h01 * g[0]) / det]
            } else {
                // indefinite Hessian: fall back to a scaled descent direction
                let scale = 1.0 / (h00.abs() + h11.abs()).max(1e-12);
                [-g[0] * scale, -g[1] * scale]
            };

            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let (t, p) = wrap_parameters(theta + alpha * step[0], phi + alpha * step[1]);
                let v = objective(t, p);
                if v < value {
                    accepted = Some((t, p, v));
                    break;
                }
                alpha *= 0.5;
            }
            match accepted {
                Some((t, p, v)) => {
                    theta = t;
                    phi = p;
                    value = v;
                }
                // No representable decrease: the iterate sits at the rounding floor.
                None => {
                    return if g[0].abs().max(g[1].abs()) < 1e-9 { Some((theta, phi)) } else { None };
                }
            }
        }
        None
    }
}

/// Maps arbitrary `(θ, φ)` back into `[0, π] × (−π, π]`.
fn wrap_parameters(mut theta: f64, mut phi: f64) -> (f64, f64) {
    theta = theta.rem_euclid(2.0 * PI);
    if theta > PI {
        theta = 2.0 * PI - theta;
        phi += PI;
    }
    phi = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if phi == -PI {
        phi = PI;
    }
    (theta, phi)
}

/// Unit-sphere direction `v(θ, φ)`.
#[inline]
pub fn unit_direction(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vec3::new(st * cp, st * sp, ct)
}

/// Close evaluation point `x = y* − ε ℓ n*` on the interior side.
pub fn evaluation_point(ystar: &SurfacePoint, eps: f64, ell: f64) -> Vec3 {
    ystar.position - ystar.normal * (eps * ell)
}
