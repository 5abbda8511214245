//! Numerical building blocks shared by the physics modules.

pub mod elliptic;
pub mod fit;
pub mod ode;
pub mod optimize;
pub mod quadrature;
pub mod spectrum;

pub use ode::{solve, Flow, Method, OdeSystem, Outcome};
