use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Result};

pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhysicalConstants {
    /// Vacuum permeability, T·m/A.
    pub mu0: f64,
    /// Gravitational acceleration, m/s².
    pub g: f64,
    /// Magnet density, kg/m³.
    pub rho_m: f64,
    /// Saturation magnetization, T.
    pub b_sat: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { mu0: MU0, g: 9.8, rho_m: 7.0e3, b_sat: 1.0 }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("mu0", self.mu0)?;
        ensure_positive("g", self.g)?;
        ensure_positive("rho_m", self.rho_m)?;
        ensure_positive("b_sat", self.b_sat)
    }
}

/// Angular frequency in rad/s, reported alongside its value in Hz.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub rad_s: f64,
    pub hz: f64,
}

impl Frequency {
    pub fn from_rad_s(w: f64) -> Self {
        Self { rad_s: w, hz: w / (2.0 * std::f64::consts::PI) }
    }

    pub fn from_hz(f: f64) -> Self {
        Self { rad_s: 2.0 * std::f64::consts::PI * f, hz: f }
    }
}
