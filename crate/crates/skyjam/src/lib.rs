//! Scenario files, output formats and the batch command line around
//! `skyjam-core`.

pub mod cli;
pub mod config;
pub mod report;

pub use cli::{run_cli, Args, CliError, RunManifest};
pub use config::{ConfigError, ScenarioConfig, DEFAULT_SCENARIO};
