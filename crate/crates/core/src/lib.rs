//! Close evaluation of Laplace layer potentials in three dimensions.
//!
//! The double- and single-layer potentials of the interior representation
//! formula are written in spherical coordinates rotated so that the boundary
//! point nearest the evaluation point sits at the north pole. The polar angle
//! is integrated with a Gauss-Legendre rule mapped affinely onto `(0, π)` and
//! the azimuth with a periodic trapezoid rule.
//!
//! Modules:
//! - [`geometry`]: benchmark surfaces, frames, closest-point projection
//! - [`rotation`]: the pole-aligning rotation and angle pullback
//! - [`quadrature`]: Gauss-Legendre and the rotated product rule
//! - [`potentials`]: kernels and the three representation-formula evaluators
//! - [`reference`]: exact harmonic field and closed-form sphere kernels
//! - [`harness`]: ε-sweeps, (N, ε) grids, slices, slope fits and CSV I/O

pub mod error;
pub mod geometry;
pub mod harness;
pub mod potentials;
pub mod quadrature;
pub mod reference;
pub mod rotation;
pub mod vec3;

pub use error::{Error, Result};
pub use geometry::{evaluation_point, ProfileKind, SurfaceDomain, SurfacePoint};
pub use potentials::{
    dlp_kernel, evaluate_approx1, evaluate_approx2, evaluate_approx3, gauss_law_check, slp_kernel, Approximation,
    BoundarySamples, DensityPair, Target,
};
pub use quadrature::{gauss_legendre, integrate_rotated, product_rule, ProductRule};
pub use reference::{densities_from_exact, exact_gradient, exact_solution, sphere_kernel_oracles};
pub use rotation::{rotated_angles, rotation_matrix, RotationFrame};
pub use vec3::Vec3;
