use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use super::body::BodyProperties;
use super::orientation::EulerZyz;
use crate::error::{Error, Result};

/// Number of scalar components in the packed state vector.
pub const STATE_DIM: usize = 13;

/// Rigid-body state. Angular momentum is kept in the lab frame; the Euler
/// angles and their conjugate momenta are derived views.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidState {
    pub position: Vector3<f64>,
    /// Body-to-lab rotation.
    pub orientation: UnitQuaternion<f64>,
    pub momentum: Vector3<f64>,
    pub angular_momentum: Vector3<f64>,
}

impl RigidState {
    pub fn at_rest(position: Vector3<f64>, euler: EulerZyz) -> Self {
        Self {
            position,
            orientation: euler.to_quaternion(),
            momentum: Vector3::zeros(),
            angular_momentum: Vector3::zeros(),
        }
    }

    /// Builds a state from velocities (linear and lab-frame angular).
    pub fn from_velocities(
        position: Vector3<f64>,
        velocity: Vector3<f64>,
        euler: EulerZyz,
        omega_lab: Vector3<f64>,
        props: &BodyProperties,
    ) -> Self {
        let q = euler.to_quaternion();
        let r = q.to_rotation_matrix();
        let l = r * (props.inertia * (r.inverse() * omega_lab));
        Self { position, orientation: q, momentum: props.mass * velocity, angular_momentum: l }
    }

    /// Builds a state from Euler angles and their conjugate momenta.
    pub fn from_euler(
        position: Vector3<f64>,
        momentum: Vector3<f64>,
        euler: EulerZyz,
        p_ang: Vector3<f64>,
    ) -> Result<Self> {
        let margin = euler.gimbal_margin();
        if margin <= 1e-6 {
            return Err(Error::GimbalProximity { cos_beta: margin });
        }
        let et = euler.rate_matrix().transpose();
        let l = et
            .lu()
            .solve(&p_ang)
            .ok_or(Error::GimbalProximity { cos_beta: margin })?;
        Ok(Self { position, orientation: euler.to_quaternion(), momentum, angular_momentum: l })
    }

    pub fn euler(&self) -> EulerZyz {
        EulerZyz::from_quaternion(&self.orientation)
    }

    /// Conjugate momenta `(p_α, p_β̃, p_γ) = E(u)ᵀ L`.
    pub fn euler_momenta(&self) -> Vector3<f64> {
        self.euler().rate_matrix().transpose() * self.angular_momentum
    }

    pub fn velocity(&self, props: &BodyProperties) -> Vector3<f64> {
        self.momentum / props.mass
    }

    pub fn angular_velocity_body(&self, props: &BodyProperties) -> Vector3<f64> {
        let l_body = self.orientation.inverse() * self.angular_momentum;
        // Principal axes: the inertia tensor is diagonal in the body frame.
        Vector3::new(
            l_body.x / props.inertia[(0, 0)],
            l_body.y / props.inertia[(1, 1)],
            l_body.z / props.inertia[(2, 2)],
        )
    }

    pub fn angular_velocity_lab(&self, props: &BodyProperties) -> Vector3<f64> {
        self.orientation * self.angular_velocity_body(props)
    }

    pub fn moment_lab(&self, props: &BodyProperties) -> Vector3<f64> {
        self.orientation * props.moment_body()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![0.0; STATE_DIM];
        self.write(&mut v);
        v
    }

    pub fn write(&self, v: &mut [f64]) {
        v[0..3].copy_from_slice(self.position.as_slice());
        let q = self.orientation.quaternion();
        v[3] = q.w;
        v[4] = q.i;
        v[5] = q.j;
        v[6] = q.k;
        v[7..10].copy_from_slice(self.momentum.as_slice());
        v[10..13].copy_from_slice(self.angular_momentum.as_slice());
    }

    /// Unpacks a state vector, renormalising the quaternion.
    pub fn from_slice(v: &[f64]) -> Self {
        Self {
            position: Vector3::new(v[0], v[1], v[2]),
            orientation: UnitQuaternion::from_quaternion(Quaternion::new(v[3], v[4], v[5], v[6])),
            momentum: Vector3::new(v[7], v[8], v[9]),
            angular_momentum: Vector3::new(v[10], v[11], v[12]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_body_properties, MagnetBody, PhysicalConstants};
    use approx::assert_relative_eq;

    #[test]
    fn packing_round_trip() {
        let s = RigidState {
            position: Vector3::new(1.0, 2.0, 3.0),
            orientation: EulerZyz::new(0.1, 0.2, 0.3).to_quaternion(),
            momentum: Vector3::new(-1.0, 0.5, 0.25),
            angular_momentum: Vector3::new(4.0, 5.0, 6.0),
        };
        let back = RigidState::from_slice(&s.to_vec());
        assert_relative_eq!(back.position, s.position);
        assert!(back.orientation.angle_to(&s.orientation) < 1e-15);
        assert_relative_eq!(back.angular_momentum, s.angular_momentum);
    }

    #[test]
    fn euler_momenta_round_trip() {
        let u = EulerZyz::new(0.4, -0.3, 2.0);
        let p = Vector3::new(1e-3, -2e-3, 5e-4);
        let s = RigidState::from_euler(Vector3::zeros(), Vector3::zeros(), u, p).unwrap();
        assert_relative_eq!(s.euler_momenta(), p, epsilon = 1e-15);
    }

    #[test]
    fn gimbal_lock_is_rejected() {
        let u = EulerZyz::new(0.0, std::f64::consts::FRAC_PI_2, 0.0);
        assert!(matches!(
            RigidState::from_euler(Vector3::zeros(), Vector3::zeros(), u, Vector3::x()),
            Err(Error::GimbalProximity { .. })
        ));
    }

    #[test]
    fn velocities_round_trip() {
        let props = derive_body_properties(&MagnetBody::cuboid(1e-3, 2e-3, 3e-3), &PhysicalConstants::default())
            .unwrap();
        let w = Vector3::new(3.0, -1.0, 2.0);
        let s = RigidState::from_velocities(Vector3::zeros(), Vector3::x(), EulerZyz::new(0.3, 0.2, 0.1), w, &props);
        assert_relative_eq!(s.angular_velocity_lab(&props), w, max_relative = 1e-12);
        assert_relative_eq!(s.velocity(&props), Vector3::x(), max_relative = 1e-12);
    }
}
