//! Chip-trap design description and its aggregated feasibility report.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::budget::{
    coupling_check, current_density_check, double_loop_curvature, eddy_heating_power, gravity_compensation,
    gravity_sag, induced_current_ratio, null_ratio_holds, CurrentDensity, DoubleLoopCurvature, B2_PRIME_ROUNDED,
};
use crate::dynamics::{LinearFields, LinearizedModel};
use crate::error::{ensure_positive, Error, Result};
use crate::fields::FieldSource;
use crate::model::{derive_body_properties, MagnetBody, PhysicalConstants, Shape};
use crate::stability::{q_parameters, QParameters};

/// Electrical conductivity of gold, S/m.
pub const GOLD_CONDUCTIVITY: f64 = 4.4e7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wire {
    pub width: f64,
    pub thickness: f64,
}

impl Wire {
    pub fn cross_section(&self) -> f64 {
        self.width * self.thickness
    }
}

fn gold() -> f64 {
    GOLD_CONDUCTIVITY
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChipDesign {
    /// Inner and outer loop radii, m.
    pub r1: f64,
    pub r2: f64,
    /// Current amplitudes, A.
    pub i1: f64,
    pub i2: f64,
    /// Drive angular frequency, rad/s.
    pub omega: f64,
    /// Bias field, T.
    pub b0: f64,
    pub wire1: Wire,
    pub wire2: Wire,
    #[serde(default = "gold")]
    pub sigma: f64,
    pub body: MagnetBody,
    #[serde(default)]
    pub constants: PhysicalConstants,
    /// Prescribed curvature B1″ (T/m²); the loop curvature is used otherwise.
    #[serde(default)]
    pub curvature: Option<f64>,
    /// Require `i1/i2 = −r1/r2`.
    #[serde(default = "yes")]
    pub require_null_ratio: bool,
}

impl ChipDesign {
    /// Gold double loop with r1 = 100 µm, r2 = 200 µm, i1 = 0.1 A and
    /// i2 = −0.2 A, a 1 µm sphere in B0 = 10 mT, driven at `omega`.
    pub fn reference(omega: f64) -> Self {
        Self {
            r1: 100e-6,
            r2: 200e-6,
            i1: 0.1,
            i2: -0.2,
            omega,
            b0: 0.01,
            wire1: Wire { width: 50e-6, thickness: 2e-6 },
            wire2: Wire { width: 100e-6, thickness: 2e-6 },
            sigma: GOLD_CONDUCTIVITY,
            body: MagnetBody::sphere(1e-6).with_moment_dir(nalgebra::Vector3::z()),
            constants: PhysicalConstants::default(),
            curvature: None,
            require_null_ratio: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("r1", self.r1)?;
        if !(self.r2 > self.r1) {
            return Err(Error::InvalidGeometry(format!("need r2 > r1, got r1 = {}, r2 = {}", self.r1, self.r2)));
        }
        ensure_positive("omega", self.omega)?;
        ensure_positive("sigma", self.sigma)?;
        for w in [&self.wire1, &self.wire2] {
            ensure_positive("wire width", w.width)?;
            ensure_positive("wire thickness", w.thickness)?;
        }
        if !self.b0.is_finite() {
            return Err(Error::InvalidInput("b0 must be finite".into()));
        }
        if let Some(c) = self.curvature {
            if !c.is_finite() {
                return Err(Error::InvalidInput("curvature must be finite".into()));
            }
        }
        if self.require_null_ratio && !null_ratio_holds(self.r1, self.r2, self.i1, self.i2) {
            return Err(Error::InvalidInput(format!(
                "i1/i2 = {:.6e} differs from −r1/r2 = {:.6e}",
                self.i1 / self.i2,
                -self.r1 / self.r2
            )));
        }
        self.body.validate()?;
        self.constants.validate()
    }

    /// Loop curvature, or the prescribed one.
    pub fn b1_pp(&self) -> Result<f64> {
        match self.curvature {
            Some(c) => Ok(c),
            None => Ok(double_loop_curvature(self.r1, self.r2, self.i1, self.i2, self.constants.mu0)?.numeric),
        }
    }

    /// Bias, drive and (optionally) the gravity-compensation gradient.
    pub fn sources(&self, compensate_gravity: bool) -> Result<Vec<FieldSource>> {
        let b2_prime = if compensate_gravity { gravity_compensation(&self.constants)? } else { 0.0 };
        Ok(LinearFields { b0: self.b0, b1_pp: self.b1_pp()?, b2_prime, omega: self.omega }.sources())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub curvature: DoubleLoopCurvature,
    /// Curvature driving the trap, T/m².
    pub b1_pp: f64,
    pub q: QParameters,
    /// Secular frequencies `ω̃_x, ω̃_y, ω̃_z`, rad/s.
    pub secular: [f64; 3],
    pub omega_beta_tilde: f64,
    pub omega_gamma: f64,
    pub omega_c: f64,
    /// Compensation gradient, T/m.
    pub b2_prime: f64,
    pub b2_prime_rounded: f64,
    /// `|b2_prime_rounded − b2_prime|/b2_prime`.
    pub b2_prime_discrepancy: f64,
    /// Uncompensated mean axial offset, m.
    pub gravity_sag: f64,
    pub coupling_negligible: bool,
    pub induced_current_ratio: f64,
    /// W.
    pub eddy_power: f64,
    pub current_density: [CurrentDensity; 2],
    pub currents_feasible: bool,
}

impl DesignReport {
    pub fn all_feasible(&self) -> bool {
        self.q.valid && self.coupling_negligible && self.currents_feasible
    }
}

fn context(what: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{what}: {m}")),
        Error::InvalidGeometry(m) => Error::InvalidGeometry(format!("{what}: {m}")),
        other => other,
    }
}

pub fn design_report(d: &ChipDesign) -> Result<DesignReport> {
    d.validate()?;
    let c = &d.constants;
    let curvature = double_loop_curvature(d.r1, d.r2, d.i1, d.i2, c.mu0).map_err(context("loop curvature"))?;
    let b1_pp = d.curvature.unwrap_or(curvature.numeric);
    let b_sat = d.body.saturation(c);
    let rho_m = d.body.density(c);
    let q = q_parameters(b1_pp, b_sat, rho_m, c.mu0, d.omega).map_err(context("q parameters"))?;
    let body_constants = PhysicalConstants { b_sat, rho_m, ..*c };
    let b2_prime = gravity_compensation(&body_constants).map_err(context("gravity compensation"))?;
    let props = derive_body_properties(&d.body, c)?;
    let lin = LinearizedModel::new(&props, &LinearFields { b0: d.b0, b1_pp, b2_prime, omega: d.omega })?;
    let radius = match d.body.shape {
        Shape::Sphere { radius } => radius,
        other => other.bounding_radius(),
    };
    let j1 = current_density_check(d.i1, d.wire1.width, d.wire1.thickness).map_err(context("loop 1"))?;
    let j2 = current_density_check(d.i2, d.wire2.width, d.wire2.thickness).map_err(context("loop 2"))?;
    let report = DesignReport {
        curvature,
        b1_pp,
        q,
        secular: lin.secular,
        omega_beta_tilde: lin.omega_beta_tilde,
        omega_gamma: lin.omega_gamma,
        omega_c: lin.omega_c,
        b2_prime,
        b2_prime_rounded: B2_PRIME_ROUNDED,
        b2_prime_discrepancy: (B2_PRIME_ROUNDED - b2_prime).abs() / b2_prime,
        gravity_sag: gravity_sag(lin.secular[2], c.g).map_err(context("gravity sag"))?,
        coupling_negligible: coupling_check(lin.secular[0], lin.omega_beta_tilde, lin.omega_c),
        induced_current_ratio: induced_current_ratio(d.sigma, d.wire1.cross_section(), d.omega, c.mu0),
        eddy_power: eddy_heating_power(d.omega, d.sigma, radius, b1_pp),
        current_density: [j1, j2],
        currents_feasible: j1.feasible && j2.feasible,
    };
    Ok(report)
}

/// Reports for the design at each drive frequency, in order.
pub fn design_sweep(d: &ChipDesign, omegas: &[f64]) -> Result<Vec<DesignReport>> {
    omegas
        .par_iter()
        .map(|&w| design_report(&ChipDesign { omega: w, ..d.clone() }))
        .collect()
}
