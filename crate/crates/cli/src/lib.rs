// SPDX-License-Identifier: Apache-2.0

//! Batch experiments over the slender fiber solver: configuration, golden
//! fixtures, CSV/JSON/SVG output and one module per command.

pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod output;

pub use commands::{Command, Outcome};
pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use output::Sink;

/// JSON schema of experiment configuration files.
pub const CONFIG_SCHEMA: &str = include_str!("../schema/experiment_config.schema.json");
