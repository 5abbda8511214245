use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::body::{derive_body_properties, BodyProperties, MagnetBody};
use super::constants::PhysicalConstants;
use super::orientation::EulerZyz;
use super::state::RigidState;
use crate::error::{Error, Result};
use crate::fields::{validate_sources, FieldSource};
use crate::numerics::Method;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ForceModel {
    /// Point dipole at the centre of mass.
    #[default]
    Dipole,
    /// Gauss quadrature of the magnetization over the body volume.
    FiniteVolume { order: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationSpec {
    pub method: Method,
    #[serde(default)]
    pub t0: f64,
    pub t_end: f64,
    /// Sampling interval of the stored trajectory; every step when absent.
    #[serde(default)]
    pub output_interval: Option<f64>,
    /// The run stops, flagged unstable, once |r| exceeds this radius.
    #[serde(default)]
    pub escape_radius: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct InitialCondition {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
    pub euler: EulerZyz,
    /// Lab-frame angular velocity, rad/s.
    pub angular_velocity: Vector3<f64>,
}

impl InitialCondition {
    pub fn to_state(&self, props: &BodyProperties) -> RigidState {
        RigidState::from_velocities(self.position, self.velocity, self.euler, self.angular_velocity, props)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapScenario {
    pub body: MagnetBody,
    #[serde(default)]
    pub constants: PhysicalConstants,
    #[serde(default)]
    pub sources: Vec<FieldSource>,
    #[serde(default)]
    pub gravity: bool,
    #[serde(default)]
    pub force_model: ForceModel,
    /// Freezes the orientation so only the translational motion evolves.
    #[serde(default)]
    pub rotation_locked: bool,
    pub integration: IntegrationSpec,
    #[serde(default)]
    pub initial: InitialCondition,
}

impl TrapScenario {
    pub fn validate(&self) -> Result<()> {
        self.body.validate()?;
        self.constants.validate()?;
        validate_sources(&self.sources)?;
        self.integration.method.validate()?;
        let i = &self.integration;
        if !(i.t_end.is_finite() && i.t_end > i.t0) || !i.t0.is_finite() {
            return Err(Error::InvalidInput(format!("t_end ({}) must exceed t0 ({})", i.t_end, i.t0)));
        }
        if let Some(o) = i.output_interval {
            crate::error::ensure_positive("output_interval", o)?;
        }
        if let Some(r) = i.escape_radius {
            crate::error::ensure_positive("escape_radius", r)?;
        }
        if let ForceModel::FiniteVolume { order } = self.force_model {
            if order < 2 {
                return Err(Error::InvalidInput(format!("quadrature order must be at least 2, got {order}")));
            }
        }
        Ok(())
    }

    pub fn properties(&self) -> Result<BodyProperties> {
        derive_body_properties(&self.body, &self.constants)
    }

    pub fn initial_state(&self) -> Result<RigidState> {
        Ok(self.initial.to_state(&self.properties()?))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sc: Self = serde_json::from_str(s)?;
        sc.validate()?;
        Ok(sc)
    }
}
