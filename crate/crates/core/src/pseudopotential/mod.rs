//! Time-averaged (ponderomotive) potentials of the rotating platform.

pub mod potential;
pub mod profile;
pub mod radial;

pub use potential::{
    equilibrium_height, height_vs_drive, AxialPotential, HeightRow, HeightScan, PseudoPotentialProfile, Trend,
    EQUILIBRIUM_TOL,
};
pub use profile::{
    omega_r, omega_z, taylor_fit_f, taylor_fit_profile, AxialDrive, AxisGrid, CurvatureProfile, TaylorFit,
};
pub use radial::{radial_displacement_scan, radial_structure, RadialRow, RadialScanOptions, RadialStructure, Regime};
