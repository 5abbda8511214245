//! Trajectory integration.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::eom::RigidBodySystem;
use crate::error::{Error, Result};
use crate::model::{RigidState, TrapScenario};
use crate::numerics::{solve, Flow};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Kinetic plus potential energy, J.
    pub energy: f64,
    /// Field at the centre of mass, T.
    pub field: Vector3<f64>,
    pub force: Vector3<f64>,
    pub torque: Vector3<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// The body left the escape sphere.
    Escaped { t: f64, radius: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<RigidState>,
    pub diagnostics: Vec<Diagnostics>,
    pub termination: Termination,
}

/// Scalar views of a trajectory sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinate {
    X,
    Y,
    Z,
    Alpha,
    BetaTilde,
    Gamma,
    Px,
    Py,
    Pz,
    PAlpha,
    PBetaTilde,
    PGamma,
    Energy,
}

impl Coordinate {
    pub const ALL: [Coordinate; 13] = [
        Coordinate::X,
        Coordinate::Y,
        Coordinate::Z,
        Coordinate::Alpha,
        Coordinate::BetaTilde,
        Coordinate::Gamma,
        Coordinate::Px,
        Coordinate::Py,
        Coordinate::Pz,
        Coordinate::PAlpha,
        Coordinate::PBetaTilde,
        Coordinate::PGamma,
        Coordinate::Energy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Coordinate::X => "x",
            Coordinate::Y => "y",
            Coordinate::Z => "z",
            Coordinate::Alpha => "alpha",
            Coordinate::BetaTilde => "beta_tilde",
            Coordinate::Gamma => "gamma",
            Coordinate::Px => "px",
            Coordinate::Py => "py",
            Coordinate::Pz => "pz",
            Coordinate::PAlpha => "p_alpha",
            Coordinate::PBetaTilde => "p_beta_tilde",
            Coordinate::PGamma => "p_gamma",
            Coordinate::Energy => "energy",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// All thirteen coordinates of sample `k`, in [`Coordinate::ALL`] order.
    pub fn row(&self, k: usize) -> [f64; 13] {
        let s = &self.states[k];
        let u = s.euler();
        let pu = s.euler_momenta();
        [
            s.position.x,
            s.position.y,
            s.position.z,
            u.alpha,
            u.beta_tilde,
            u.gamma,
            s.momentum.x,
            s.momentum.y,
            s.momentum.z,
            pu.x,
            pu.y,
            pu.z,
            self.diagnostics[k].energy,
        ]
    }

    pub fn value(&self, k: usize, c: Coordinate) -> f64 {
        let s = &self.states[k];
        match c {
            Coordinate::X => s.position.x,
            Coordinate::Y => s.position.y,
            Coordinate::Z => s.position.z,
            Coordinate::Px => s.momentum.x,
            Coordinate::Py => s.momentum.y,
            Coordinate::Pz => s.momentum.z,
            Coordinate::Energy => self.diagnostics[k].energy,
            Coordinate::Alpha => s.euler().alpha,
            Coordinate::BetaTilde => s.euler().beta_tilde,
            Coordinate::Gamma => s.euler().gamma,
            Coordinate::PAlpha => s.euler_momenta().x,
            Coordinate::PBetaTilde => s.euler_momenta().y,
            Coordinate::PGamma => s.euler_momenta().z,
        }
    }

    pub fn series(&self, c: Coordinate) -> Vec<f64> {
        (0..self.len()).map(|k| self.value(k, c)).collect()
    }

    pub fn max_radius(&self) -> f64 {
        self.states.iter().map(|s| s.position.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation of the energy from its initial value, relative to
    /// the largest energy magnitude seen along the run.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.diagnostics[0].energy;
        let scale = self.diagnostics.iter().map(|d| d.energy.abs()).fold(f64::MIN_POSITIVE, f64::max);
        self.diagnostics.iter().map(|d| (d.energy - e0).abs() / scale).fold(0.0, f64::max)
    }
}

/// Integrates `scenario` from `initial`, sampling at the configured output
/// interval. Leaving the escape sphere ends the run with
/// [`Termination::Escaped`].
pub fn integrate(scenario: &TrapScenario, initial: &RigidState) -> Result<Trajectory> {
    let sys = RigidBodySystem::new(scenario)?;
    let spec = &scenario.integration;
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut diagnostics = Vec::new();
    let mut termination = Termination::Completed;
    let mut failure: Option<Error> = None;
    solve(&sys, &spec.method, spec.t0, &initial.to_vec(), spec.t_end, spec.output_interval, |t, y| {
        let state = RigidState::from_slice(y);
        let ft = match sys.force_torque(&state, t) {
            Ok(ft) => ft,
            Err(e) => {
                failure = Some(e);
                return Flow::Stop;
            }
        };
        diagnostics.push(Diagnostics {
            energy: sys.kinetic_energy(&state) + ft.potential,
            field: ft.field,
            force: ft.force,
            torque: ft.torque,
        });
        times.push(t);
        states.push(state);
        if let Some(r_max) = spec.escape_radius {
            let r = state.position.norm();
            if r > r_max {
                termination = Termination::Escaped { t, radius: r };
                return Flow::Stop;
            }
        }
        Flow::Continue
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if times.len() < 2 {
        return Err(Error::InvalidInput("trajectory has fewer than two samples".into()));
    }
    log::debug!("integrated {} samples to t = {}", times.len(), times[times.len() - 1]);
    Ok(Trajectory { times, states, diagnostics, termination })
}
