//! First-order forces and torques around the chip-trap centre, and the
//! harmonic frequencies of the time-averaged small-motion model.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::FieldSource;
use crate::model::{BodyProperties, PhysicalConstants, RigidState};
use crate::stability::formulas::{mathieu_secular_z, q_from_coefficient};

/// Field parameters of the chip trap: bias `B0 e_z`, compensation gradient
/// `B2′` and the oscillating curvature `B1″ cos Ωt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFields {
    pub b0: f64,
    pub b1_pp: f64,
    pub b2_prime: f64,
    pub omega: f64,
}

impl LinearFields {
    /// The equivalent list of field sources.
    pub fn sources(&self) -> Vec<FieldSource> {
        vec![
            FieldSource::Homogeneous { b0: self.b0, direction: Vector3::z() },
            FieldSource::Gradient { b2_prime: self.b2_prime },
            FieldSource::HarmonicChipField { b1_pp: self.b1_pp, omega: self.omega, phase: 0.0 },
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct LinearCoordinates {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub alpha: f64,
    pub beta_tilde: f64,
    pub gamma: f64,
}

impl LinearCoordinates {
    pub fn from_state(s: &RigidState) -> Self {
        let u = s.euler();
        Self {
            x: s.position.x,
            y: s.position.y,
            z: s.position.z,
            alpha: u.alpha,
            beta_tilde: u.beta_tilde,
            gamma: u.gamma,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearForces {
    /// Force including gravity, N.
    pub force: Vector3<f64>,
    /// `(Γ_α, Γ_β̃, Γ_γ)`, N·m.
    pub euler_torques: Vector3<f64>,
}

/// Forces and generalised torques to first order in the displacements and
/// the tilts `β̃`, `γ`; `α` enters through its sine and cosine.
pub fn linearized_forces(
    c: &LinearCoordinates,
    f: &LinearFields,
    props: &BodyProperties,
    constants: &PhysicalConstants,
    gravity: bool,
    t: f64,
) -> LinearForces {
    let mu = props.moment;
    let drive = (f.omega * t).cos();
    let (sa, ca) = c.alpha.sin_cos();
    let half1 = 0.5 * mu * f.b1_pp * drive;
    let half2 = 0.5 * mu * f.b2_prime;
    let weight = if gravity { props.mass * constants.g } else { 0.0 };
    let force = Vector3::new(
        -half1 * c.x - half2 * (ca * c.beta_tilde + sa * c.gamma),
        -half1 * c.y - half2 * (sa * c.beta_tilde - ca * c.gamma),
        -weight + mu * f.b2_prime + mu * f.b1_pp * drive * c.z,
    );
    let euler_torques = Vector3::new(
        0.0,
        -mu * f.b0 * c.beta_tilde - half2 * (ca * c.x + sa * c.y),
        -mu * f.b0 * c.gamma - half2 * (sa * c.x - ca * c.y),
    );
    LinearForces { force, euler_torques }
}

/// Frequencies of the time-averaged linear model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearizedModel {
    /// Secular frequencies `ω̃_x, ω̃_y, ω̃_z`, rad/s.
    pub secular: [f64; 3],
    pub omega_beta_tilde: f64,
    pub omega_gamma: f64,
    /// Translation–rotation coupling frequency, rad/s.
    pub omega_c: f64,
    pub drive: f64,
    /// `(q_x, q_y, q_z)`.
    pub q: [f64; 3],
}

impl LinearizedModel {
    /// `q_z = 2μB1″/(mΩ²)`, `ω̃_z = 2ω̃_x = 2ω̃_y = (Ω/2)|q_z|/√2`,
    /// `ω_β̃² = μB0/I₂₂`, `ω_γ² = μB0/I₃₃`, `ω_c² = μB2′/√(m·√(I₂₂I₃₃))`.
    pub fn new(props: &BodyProperties, f: &LinearFields) -> Result<Self> {
        if !(f.omega > 0.0) {
            return Err(Error::DivisionByZero("drive frequency"));
        }
        let mu = props.moment;
        let m = props.mass;
        let qz = q_from_coefficient(mu * f.b1_pp / m, f.omega);
        let wz = mathieu_secular_z(qz, f.omega);
        let i22 = props.inertia[(1, 1)];
        let i33 = props.inertia[(2, 2)];
        let libration = |i: f64| (mu * f.b0 / i).max(0.0).sqrt();
        let i_perp = (i22 * i33).sqrt();
        let omega_c = (mu * f.b2_prime.abs() / (m * i_perp).sqrt()).sqrt();
        Ok(Self {
            secular: [0.5 * wz, 0.5 * wz, wz],
            omega_beta_tilde: libration(i22),
            omega_gamma: libration(i33),
            omega_c,
            drive: f.omega,
            q: [-0.5 * qz, -0.5 * qz, qz],
        })
    }
}
