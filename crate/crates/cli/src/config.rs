//! Subcommand configuration files (JSON, SI units, angular rates in rad/s).

use serde::{Deserialize, Serialize};

use magtrap::chiptrap::ChipDesign;
use magtrap::fields::{FieldSource, GridAxis, GridSpec, RotatingPlatform};
use magtrap::model::PhysicalConstants;
use magtrap::pseudopotential::{AxisGrid, RadialScanOptions};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldMapConfig {
    pub sources: Vec<FieldSource>,
    pub grid: GridSpec,
    #[serde(default)]
    pub time: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityScanConfig {
    pub omega_r: GridAxis,
    pub omega: GridAxis,
}

/// Bar of length `l` and square section `h × h`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bar {
    pub l: f64,
    pub h: f64,
}

fn yes() -> bool {
    true
}

/// Axial potential of a bar above the platform.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxialConfig {
    pub platform: RotatingPlatform,
    pub bar: Bar,
    #[serde(default)]
    pub constants: PhysicalConstants,
    #[serde(default)]
    pub profile_grid: AxisGrid,
    /// Curvature-fit halfwidth; a tenth of the magnet-pair separation when absent.
    #[serde(default)]
    pub fit_halfwidth: Option<f64>,
    /// Heights at which the potential is sampled.
    pub z: GridAxis,
    #[serde(default)]
    pub volume_normalized: bool,
    #[serde(default = "yes")]
    pub gravity_down: bool,
    /// Halfwidth of the Taylor fit of F about the symmetry point.
    #[serde(default)]
    pub taylor_window: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudoPotentialConfig {
    #[serde(flatten)]
    pub axial: AxialConfig,
    pub omega: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeightScanConfig {
    #[serde(flatten)]
    pub axial: AxialConfig,
    pub omegas: GridAxis,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialScanConfig {
    pub platform: RotatingPlatform,
    #[serde(default)]
    pub constants: PhysicalConstants,
    pub offsets: GridAxis,
    #[serde(default)]
    pub options: RadialScanOptions,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChipDesignConfig {
    #[serde(flatten)]
    pub design: ChipDesign,
    /// Optional drive-frequency sweep written as CSV.
    #[serde(default)]
    pub sweep_omega: Option<GridAxis>,
}

/// Largest distance between two magnet centres of the platform.
pub fn pair_separation(p: &RotatingPlatform) -> f64 {
    let mut d: f64 = 0.0;
    for a in &p.magnets {
        for b in &p.magnets {
            d = d.max((a.center - b.center).norm());
        }
    }
    d
}
