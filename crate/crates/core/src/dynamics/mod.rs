//! Rigid-body dynamics: forces, equations of motion, integration and the
//! linearised small-motion model.

pub mod eom;
pub mod forces;
pub mod frequencies;
pub mod guiding_center;
pub mod integrate;
pub mod linearized;

pub use eom::{eom_derivative, euler_hamiltonian_rates, EulerRates, RigidBodySystem, StateDerivative};
pub use forces::{force_torque_dipole, force_torque_finite, ForceContext, ForceTorque};
pub use frequencies::{measure_frequencies, measure_series};
pub use guiding_center::{guiding_center, saddle_matrix_s};
pub use integrate::{integrate, Coordinate, Diagnostics, Termination, Trajectory};
pub use linearized::{linearized_forces, LinearCoordinates, LinearFields, LinearForces, LinearizedModel};
