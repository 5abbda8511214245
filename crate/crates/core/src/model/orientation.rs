//! zyz Euler angles with the shifted polar angle `β̃ = β − π/2`.
//!
//! The rotation maps body to lab coordinates: `R = R_z(α) R_y(β) R_z(γ)`.
//! With `β̃ = 0` and `α = γ = 0` the body e₁ axis points along −e_z and the
//! body e₃ axis along +e_x.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Rotation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct EulerZyz {
    pub alpha: f64,
    pub beta_tilde: f64,
    pub gamma: f64,
}

impl EulerZyz {
    pub fn new(alpha: f64, beta_tilde: f64, gamma: f64) -> Self {
        Self { alpha, beta_tilde, gamma }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta_tilde, self.gamma]
    }

    pub fn to_quaternion(&self) -> UnitQuaternion<f64> {
        let beta = self.beta_tilde + FRAC_PI_2;
        UnitQuaternion::from_axis_angle(&Vector3::z_axis(), self.alpha)
            * UnitQuaternion::from_axis_angle(&Vector3::y_axis(), beta)
            * UnitQuaternion::from_axis_angle(&Vector3::z_axis(), self.gamma)
    }

    pub fn from_quaternion(q: &UnitQuaternion<f64>) -> Self {
        Self::from_rotation(&q.to_rotation_matrix())
    }

    pub fn from_rotation(r: &Rotation3<f64>) -> Self {
        let m = r.matrix();
        let beta = (m[(0, 2)].hypot(m[(1, 2)])).atan2(m[(2, 2)]);
        let sb = beta.sin();
        let (alpha, gamma) = if sb > 1e-12 {
            (m[(1, 2)].atan2(m[(0, 2)]), m[(2, 1)].atan2(-m[(2, 0)]))
        } else {
            // Gimbal lock: only α ± γ is defined; put it all in α.
            ((-m[(0, 1)]).atan2(m[(1, 1)]), 0.0)
        };
        Self { alpha, beta_tilde: beta - FRAC_PI_2, gamma }
    }

    /// Matrix `E(u)` with `ω_lab = E(u) · (α̇, β̃̇, γ̇)`.
    pub fn rate_matrix(&self) -> Matrix3<f64> {
        let (sa, ca) = self.alpha.sin_cos();
        let beta = self.beta_tilde + FRAC_PI_2;
        let (sb, cb) = beta.sin_cos();
        Matrix3::new(
            0.0, -sa, ca * sb, //
            0.0, ca, sa * sb, //
            1.0, 0.0, cb,
        )
    }

    /// `|cos β̃|`, the distance from the parametrisation singularity.
    pub fn gimbal_margin(&self) -> f64 {
        self.beta_tilde.cos().abs()
    }
}
