//! Rotating-saddle stability, Floquet analysis and closed-form secular
//! frequencies.

pub mod floquet;
pub mod formulas;
pub mod saddle;
pub mod scan;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use floquet::{floquet_monodromy, FloquetResult, LabSaddle, Mathieu, PeriodicLinear};
pub use formulas::{
    chip_secular_frequencies, mainline_secular_xy, precession_frequency_saddle, q_parameters,
    secular_frequency_saddle, ChipSecular, MainlineSecular, QParameters,
};
pub use saddle::{is_stable_saddle, saddle_eigenvalues, saddle_report, saddle_stability_matrix};
pub use scan::{simulate_saddle, stability_scan, SaddleSimulation, ScanRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Eigenvalues,
    FloquetMultipliers,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub kind: SpectrumKind,
    /// Eigenvalues (autonomous) or Floquet multipliers (periodic).
    pub values: Vec<Complex64>,
    pub stable: bool,
    /// Positive inside the stable region, negative outside, zero on the boundary.
    pub margin: f64,
    /// Secular frequencies in rad/s.
    pub secular_frequencies: Vec<f64>,
    pub q_parameters: Option<QParameters>,
}
