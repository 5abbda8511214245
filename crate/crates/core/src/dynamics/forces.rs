//! Forces and torques on a magnetised rigid body.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{field_total, FieldSource};
use crate::model::{BodyProperties, MagnetBody, PhysicalConstants, RigidState};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceTorque {
    /// Total force including gravity when enabled, N.
    pub force: Vector3<f64>,
    /// Lab-frame torque about the centre of mass, N·m.
    pub torque: Vector3<f64>,
    /// Generalised torques `(Γ_α, Γ_β̃, Γ_γ) = E(u)ᵀ τ`.
    pub euler_torques: Vector3<f64>,
    /// Magnetic plus gravitational potential energy, J.
    pub potential: f64,
    /// Field at the centre of mass (dipole) or volume-averaged field (finite body), T.
    pub field: Vector3<f64>,
}

/// Environment shared by both force models.
#[derive(Clone, Copy)]
pub struct ForceContext<'a> {
    pub sources: &'a [FieldSource],
    pub props: &'a BodyProperties,
    pub constants: &'a PhysicalConstants,
    pub gravity: bool,
}

impl ForceContext<'_> {
    fn finish(&self, state: &RigidState, mut force: Vector3<f64>, torque: Vector3<f64>, mut potential: f64, field: Vector3<f64>) -> ForceTorque {
        if self.gravity {
            let m = self.props.mass;
            force.z -= m * self.constants.g;
            potential += m * self.constants.g * state.position.z;
        }
        let euler_torques = state.euler().rate_matrix().transpose() * torque;
        ForceTorque { force, torque, euler_torques, potential, field }
    }
}

/// Point-dipole model: `F = ∇(μ·B)`, `τ = μ × B`.
pub fn force_torque_dipole(state: &RigidState, t: f64, ctx: &ForceContext) -> Result<ForceTorque> {
    let sample = field_total(&state.position, t, ctx.sources)?;
    let grad = sample.grad.unwrap_or_else(Matrix3::zeros);
    let mu = state.moment_lab(ctx.props);
    let force = grad.transpose() * mu;
    let torque = mu.cross(&sample.b);
    Ok(ctx.finish(state, force, torque, -mu.dot(&sample.b), sample.b))
}

/// Finite-body model: Gauss quadrature of `−M·B` over the body volume.
pub fn force_torque_finite(
    state: &RigidState,
    t: f64,
    ctx: &ForceContext,
    body: &MagnetBody,
    order: usize,
) -> Result<ForceTorque> {
    if order < 2 {
        return Err(Error::InvalidInput(format!("quadrature order must be at least 2, got {order}")));
    }
    let rot = state.orientation;
    let m_hat = rot * ctx.props.moment_dir_body;
    let density = ctx.props.moment / ctx.props.volume;
    let mut force = Vector3::zeros();
    let mut torque = Vector3::zeros();
    let mut potential = 0.0;
    let mut field = Vector3::zeros();
    for (s, w) in body.shape.quadrature(order) {
        let arm = rot * s;
        let p = state.position + arm;
        if let Some(index) = ctx.sources.iter().position(|src| src.contains(&p, t)) {
            return Err(Error::Overlap { index });
        }
        let sample = field_total(&p, t, ctx.sources)?;
        let grad = sample.grad.unwrap_or_else(Matrix3::zeros);
        let dm = m_hat * (density * w);
        let df = grad.transpose() * dm;
        force += df;
        torque += arm.cross(&df) + dm.cross(&sample.b);
        potential -= dm.dot(&sample.b);
        field += sample.b * (w / ctx.props.volume);
    }
    Ok(ctx.finish(state, force, torque, potential, field))
}
