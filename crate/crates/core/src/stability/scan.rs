//! Parameter scans of rotating-saddle stability and direct-simulation
//! verdicts.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::floquet::{floquet_monodromy, LabSaddle};
use super::saddle::{is_stable_saddle, saddle_eigenvalues};
use crate::dynamics::{integrate, Termination, Trajectory};
use crate::error::Result;
use crate::fields::FieldSource;
use crate::model::{
    derive_body_properties, EulerZyz, ForceModel, IntegrationSpec, MagnetBody, PhysicalConstants, RigidState,
    TrapScenario,
};
use crate::numerics::Method;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub omega_r: f64,
    pub omega: f64,
    pub max_real_eig: f64,
    pub analytic_stable: bool,
    pub max_multiplier: f64,
    pub floquet_stable: bool,
}

/// Analytic and lab-frame Floquet verdicts over the grid `omega_r × omega`,
/// ordered with `omega_r` slowest. Rows are computed in parallel.
pub fn stability_scan(omega_r: &[f64], omega: &[f64]) -> Result<Vec<ScanRow>> {
    let points: Vec<(f64, f64)> = omega_r.iter().flat_map(|&wr| omega.iter().map(move |&w| (wr, w))).collect();
    points
        .par_iter()
        .map(|&(wr, w)| {
            let max_real_eig = saddle_eigenvalues(wr, w).iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
            let fl = floquet_monodromy(&LabSaddle { omega_r: wr, omega: w })?;
            Ok(ScanRow {
                omega_r: wr,
                omega: w,
                max_real_eig,
                analytic_stable: is_stable_saddle(wr, w),
                max_multiplier: fl.max_modulus,
                floquet_stable: fl.stable,
            })
        })
        .collect()
}

/// Locked-orientation sphere in an ideal rotating saddle with the given
/// `ω_r` (rad/s) and rotation rate `Ω`.
pub fn saddle_scenario(omega_r: f64, omega: f64, t_end: f64, dt: f64, output: f64) -> Result<TrapScenario> {
    let body = MagnetBody::sphere(1e-6);
    let constants = PhysicalConstants::default();
    let props = derive_body_properties(&body, &constants)?;
    // Moment along +z: r̈ = (μb/m) S r, so b = −ω_r² m/μ.
    let b_pp = -omega_r * omega_r * props.mass / props.moment;
    Ok(TrapScenario {
        body,
        constants,
        sources: vec![FieldSource::RotatingSaddle { b_pp, omega }],
        gravity: false,
        force_model: ForceModel::Dipole,
        rotation_locked: true,
        integration: IntegrationSpec { method: Method::Rk4 { dt }, t0: 0.0, t_end, output_interval: Some(output), escape_radius: None },
        initial: Default::default(),
    })
}

#[derive(Clone, Debug)]
pub struct SaddleSimulation {
    pub bounded: bool,
    pub max_radius: f64,
    pub trajectory: Trajectory,
}

/// Simulates `periods` drive periods from rest at `(r0, 0, 0)`; escape
/// beyond `escape_factor·r0` counts as divergence.
pub fn simulate_saddle(omega_r: f64, omega: f64, periods: f64, r0: f64, escape_factor: f64) -> Result<SaddleSimulation> {
    let drive_period = 2.0 * std::f64::consts::PI / omega;
    let fastest = omega.max(omega_r);
    let dt = (2.0 * std::f64::consts::PI / fastest) / 400.0;
    let mut sc = saddle_scenario(omega_r, omega, periods * drive_period, dt, 20.0 * dt)?;
    sc.integration.escape_radius = Some(escape_factor * r0);
    let traj = integrate(&sc, &RigidState::at_rest(Vector3::new(r0, 0.0, 0.0), EulerZyz::default()))?;
    Ok(SaddleSimulation {
        bounded: traj.termination == Termination::Completed,
        max_radius: traj.max_radius(),
        trajectory: traj,
    })
}
