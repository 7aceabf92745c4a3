//! Batch front end: configuration, orchestration, reports and figures.

pub mod config;
mod run;
pub mod svg;

pub use config::{ConfigError, RunConfig};
pub use run::{join_text, run, AxesSummary, Command, Outcome, Report, RunResult, SCHEMA, SCHEMA_VERSION};
