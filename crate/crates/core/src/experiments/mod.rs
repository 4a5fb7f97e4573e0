//! Batch experiments: configuration, runners and file output.

pub mod config;
pub mod output;
pub mod run;
pub mod svg;

pub use config::{ExperimentConfig, ExperimentKind, OutputFormat};
pub use run::{run, ExperimentOutput, GridResult};
