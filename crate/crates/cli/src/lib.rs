//! Experiment harness behind the `dispersion` binary.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, ExperimentId, Fault};
pub use error::{CliError, CliResult};
