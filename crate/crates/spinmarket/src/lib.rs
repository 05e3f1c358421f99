//! Experiment orchestration, file formats and the command-line front end
//! for the spin market model in `spinmarket-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod format;
pub mod output;
pub mod reanalyze;

pub use config::{ExperimentConfig, ModelSpec, Topology};
pub use error::{AppError, Result};
pub use experiment::{compute_experiment, run_experiment, ExperimentReport};
