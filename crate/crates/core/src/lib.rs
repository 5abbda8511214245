//! Simulation and design toolkit for magnetic Paul traps of hard ferromagnets.
//!
//! The crate synthesises trap fields (rotating permanent-magnet platforms and
//! on-chip current loops), integrates rigid-body dynamics, analyses stability
//! of rotating saddles, computes pseudo-potentials and evaluates chip-trap
//! design budgets.

pub mod chiptrap;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod model;
pub mod numerics;
pub mod output;
pub mod pseudopotential;
pub mod stability;

pub use error::{Error, Result};
