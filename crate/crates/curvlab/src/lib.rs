//! Command-line companion of `curvlab-core`: experiment configs, metric
//! specs, CSV/JSON artifacts, parallel sweeps and the subcommand runner.

pub mod config;
pub mod error;
pub mod io;
pub mod metric_spec;
pub mod parallel;
pub mod run;

pub use config::ExperimentConfig;
pub use error::CliError;
pub use run::{run, Command, Example, RunReport, Status};
