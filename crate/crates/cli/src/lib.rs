//! Library surface of the `weakvel` CLI: configuration schema, experiment
//! runner, and report serialization. The binary in `main.rs` is a thin clap
//! wrapper over these modules.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;
