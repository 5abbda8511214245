//! Design budgets of the double-loop planar chip trap.

pub mod budget;
pub mod design;

pub use budget::{
    coupling_check, current_density_check, double_loop_closed_form, double_loop_curvature, eddy_heating_power,
    gravity_compensation, gravity_sag, induced_current_ratio, CurrentDensity, DoubleLoopCurvature,
    MAX_CURRENT_DENSITY,
};
pub use design::{design_report, design_sweep, ChipDesign, DesignReport, Wire, GOLD_CONDUCTIVITY};
