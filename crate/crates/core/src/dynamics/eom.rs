//! Equations of motion.
//!
//! The integrated form uses a unit quaternion and the lab-frame angular
//! momentum, which is regular for every orientation. The Euler-angle
//! Hamiltonian form is provided for spherical-top bodies as a cross-check;
//! it is singular at `cos β̃ = 0` and refuses to evaluate there.

use nalgebra::{Quaternion, Vector3};

use super::forces::{force_torque_dipole, force_torque_finite, ForceContext, ForceTorque};
use crate::error::{Error, Result};
use crate::model::{BodyProperties, ForceModel, RigidState, TrapScenario, STATE_DIM};
use crate::numerics::OdeSystem;

/// Time derivative of the packed 13-component state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateDerivative {
    pub velocity: Vector3<f64>,
    pub quaternion_rate: Quaternion<f64>,
    pub force: Vector3<f64>,
    pub torque: Vector3<f64>,
}

impl StateDerivative {
    pub fn write(&self, d: &mut [f64]) {
        d[0..3].copy_from_slice(self.velocity.as_slice());
        d[3] = self.quaternion_rate.w;
        d[4] = self.quaternion_rate.i;
        d[5] = self.quaternion_rate.j;
        d[6] = self.quaternion_rate.k;
        d[7..10].copy_from_slice(self.force.as_slice());
        d[10..13].copy_from_slice(self.torque.as_slice());
    }
}

/// A scenario bound to its derived body properties.
pub struct RigidBodySystem<'a> {
    pub scenario: &'a TrapScenario,
    pub props: BodyProperties,
}

impl<'a> RigidBodySystem<'a> {
    pub fn new(scenario: &'a TrapScenario) -> Result<Self> {
        scenario.validate()?;
        Ok(Self { scenario, props: scenario.properties()? })
    }

    fn context(&self) -> ForceContext<'_> {
        ForceContext {
            sources: &self.scenario.sources,
            props: &self.props,
            constants: &self.scenario.constants,
            gravity: self.scenario.gravity,
        }
    }

    pub fn force_torque(&self, state: &RigidState, t: f64) -> Result<ForceTorque> {
        match self.scenario.force_model {
            ForceModel::Dipole => force_torque_dipole(state, t, &self.context()),
            ForceModel::FiniteVolume { order } => {
                force_torque_finite(state, t, &self.context(), &self.scenario.body, order)
            }
        }
    }

    pub fn kinetic_energy(&self, state: &RigidState) -> f64 {
        let w = state.angular_velocity_body(&self.props);
        let l_body = state.orientation.inverse() * state.angular_momentum;
        0.5 * state.momentum.norm_squared() / self.props.mass + 0.5 * w.dot(&l_body)
    }

    pub fn energy(&self, state: &RigidState, t: f64) -> Result<f64> {
        Ok(self.kinetic_energy(state) + self.force_torque(state, t)?.potential)
    }

    pub fn derivative(&self, state: &RigidState, t: f64) -> Result<StateDerivative> {
        let ft = self.force_torque(state, t)?;
        let velocity = state.momentum / self.props.mass;
        if self.scenario.rotation_locked {
            return Ok(StateDerivative {
                velocity,
                quaternion_rate: Quaternion::new(0.0, 0.0, 0.0, 0.0),
                force: ft.force,
                torque: Vector3::zeros(),
            });
        }
        let w = state.angular_velocity_body(&self.props);
        let quaternion_rate = state.orientation.quaternion() * Quaternion::from_imag(w) * 0.5;
        Ok(StateDerivative { velocity, quaternion_rate, force: ft.force, torque: ft.torque })
    }
}

impl OdeSystem for RigidBodySystem<'_> {
    fn dim(&self) -> usize {
        STATE_DIM
    }

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) -> Result<()> {
        let state = RigidState::from_slice(y);
        self.derivative(&state, t)?.write(dydt);
        Ok(())
    }

    fn project(&self, y: &mut [f64]) {
        let n = (y[3] * y[3] + y[4] * y[4] + y[5] * y[5] + y[6] * y[6]).sqrt();
        if n > 0.0 {
            for v in &mut y[3..7] {
                *v /= n;
            }
        }
    }
}

/// Full state derivative in quaternion form.
pub fn eom_derivative(state: &RigidState, scenario: &TrapScenario, t: f64) -> Result<StateDerivative> {
    RigidBodySystem::new(scenario)?.derivative(state, t)
}

/// Rates in the Euler-angle Hamiltonian form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerRates {
    /// `(α̇, β̃̇, γ̇)`.
    pub angle_rates: Vector3<f64>,
    /// `(ṗ_α, ṗ_β̃, ṗ_γ)`.
    pub momentum_rates: Vector3<f64>,
}

/// Hamilton's equations for the Euler angles of a spherical top:
///
/// `α̇ = (p_α + s p_γ)/(I c²)`, `γ̇ = (p_γ + s p_α)/(I c²)`, `β̃̇ = p_β̃/I`,
/// `ṗ_β̃ = −(p_α + s p_γ)(p_γ + s p_α)/(I c³) + Γ_β̃`, `ṗ_α = Γ_α`, `ṗ_γ = Γ_γ`,
/// with `s = sin β̃`, `c = cos β̃`.
pub fn euler_hamiltonian_rates(
    system: &RigidBodySystem,
    state: &RigidState,
    t: f64,
) -> Result<EulerRates> {
    let i = system.props.inertia;
    let scalar = i[(0, 0)];
    if ((i[(1, 1)] - scalar).abs() > 1e-12 * scalar) || ((i[(2, 2)] - scalar).abs() > 1e-12 * scalar) {
        return Err(Error::InvalidInput("Euler Hamiltonian form requires an isotropic inertia tensor".into()));
    }
    let u = state.euler();
    let c = u.beta_tilde.cos();
    if c.abs() <= 1e-6 {
        return Err(Error::GimbalProximity { cos_beta: c.abs() });
    }
    let s = u.beta_tilde.sin();
    let p = state.euler_momenta();
    let (pa, pb, pg) = (p.x, p.y, p.z);
    let gamma = system.force_torque(state, t)?.euler_torques;
    let angle_rates = Vector3::new((pa + s * pg) / (scalar * c * c), pb / scalar, (pg + s * pa) / (scalar * c * c));
    let cross = (pa + s * pg) * (pg + s * pa) / (scalar * c * c * c);
    let momentum_rates = Vector3::new(gamma.x, -cross + gamma.y, gamma.z);
    Ok(EulerRates { angle_rates, momentum_rates })
}
