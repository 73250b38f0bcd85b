//! Rotation of the parameter sphere that carries its north pole onto the
//! direction `v(θ*, φ*)`, and the induced pullback `(s, t) → (θ, φ)`.

use crate::vec3::Vec3;

/// Rotated frame attached to `(θ*, φ*)`.
///
/// The columns of `matrix` are the frame vectors `ê₁, ê₂, ê₃` written in the
/// laboratory basis, so `matrix · (0, 0, 1)ᵀ = v(θ*, φ*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationFrame {
    pub theta_star: f64,
    pub phi_star: f64,
    pub matrix: [[f64; 3]; 3],
}

impl RotationFrame {
    pub fn new(theta_star: f64, phi_star: f64) -> Self {
        let (st, ct) = theta_star.sin_cos();
        let (sp, cp) = phi_star.sin_cos();
        let matrix = [
            [ct * cp, -sp, st * cp],
            [ct * sp, cp, st * sp],
            [-st, 0.0, ct],
        ];
        RotationFrame { theta_star, phi_star, matrix }
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.matrix;
        Vec3::new(
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        )
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.matrix;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Entrywise max of `|RᵀR − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Laboratory angles of the rotated-sphere point `(s, t)`.
    #[inline]
    pub fn rotated_angles(&self, s: f64, t: f64) -> (f64, f64) {
        let (ss, cs) = s.sin_cos();
        let (st, ct) = t.sin_cos();
        let m = &self.matrix;
        let (a, b) = (ss * ct, ss * st);
        let xi = m[0][0] * a + m[0][1] * b + m[0][2] * cs;
        let eta = m[1][0] * a + m[1][1] * b + m[1][2] * cs;
        let zeta = m[2][0] * a + m[2][2] * cs;
        let rho = xi.hypot(eta);
        let theta = rho.atan2(zeta);
        let phi = if rho == 0.0 { 0.0 } else { eta.atan2(xi) };
        (theta, phi)
    }
}

pub fn rotation_matrix(theta_star: f64, phi_star: f64) -> RotationFrame {
    RotationFrame::new(theta_star, phi_star)
}

/// `(θ(s, t), φ(s, t))` for the frame centred at `(θ*, φ*)`.
///
/// Both angles use the two-argument arctangent so that `θ ∈ [0, π]` and
/// `φ ∈ (−π, π]`. At the poles of the laboratory frame φ is reported as 0.
pub fn rotated_angles(s: f64, t: f64, theta_star: f64, phi_star: f64) -> (f64, f64) {
    RotationFrame::new(theta_star, phi_star).rotated_angles(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::unit_direction;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn identity_at_north_pole() {
        let r = rotation_matrix(0.0, 0.0);
        assert_eq!(r.matrix, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    }

    #[test]
    fn quarter_turn_about_y() {
        let r = rotation_matrix(FRAC_PI_2, 0.0);
        let expected = [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((r.matrix[i][j] - expected[i][j]).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn rotated_angle_examples() {
        let (theta, phi) = rotated_angles(0.0, 1.3, 0.8, -2.1);
        assert!((theta - 0.8).abs() < 1e-15 && (phi + 2.1).abs() < 1e-15);

        let (theta, phi) = rotated_angles(FRAC_PI_2, 0.0, FRAC_PI_2, 0.0);
        assert!((theta - PI).abs() < 1e-15);
        assert_eq!(phi, 0.0);

        let (theta, phi) = rotated_angles(0.4, -2.0, 0.0, 0.0);
        assert!((theta - 0.4).abs() < 1e-15 && (phi + 2.0).abs() < 1e-15);
    }

    #[test]
    fn pole_convention() {
        let (theta, phi) = rotated_angles(0.0, 0.7, 0.0, 0.0);
        assert_eq!((theta, phi), (0.0, 0.0));
    }

    proptest! {
        #[test]
        fn rotation_is_orthonormal(theta_star in 0.0..=PI, phi_star in -PI..=PI) {
            let r = rotation_matrix(theta_star, phi_star);
            prop_assert!(r.orthogonality_defect() < 1e-14);
            prop_assert!((r.determinant() - 1.0).abs() < 1e-14);
            let north = r.apply(Vec3::new(0.0, 0.0, 1.0));
            prop_assert!((north - unit_direction(theta_star, phi_star)).max_abs() < 1e-14);
        }

        #[test]
        fn pullback_consistent(s in 0.0..=PI, t in -PI..=PI, theta_star in 0.0..=PI, phi_star in -PI..=PI) {
            let r = rotation_matrix(theta_star, phi_star);
            let (theta, phi) = r.rotated_angles(s, t);
            prop_assert!((0.0..=PI).contains(&theta));
            prop_assert!(phi > -PI && phi <= PI);
            let lhs = unit_direction(theta, phi);
            let rhs = r.apply(unit_direction(s, t));
            prop_assert!((lhs - rhs).max_abs() < 1e-12);
        }
    }
}
