//! Batch front-end of the magtrap toolkit.

pub mod config;
pub mod manifest;
pub mod presets;
pub mod run;
