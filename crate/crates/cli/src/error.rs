// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Solver {
        context: String,
        #[source]
        source: slenderflow_core::Error,
    },

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("output error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn solver(context: impl Into<String>) -> impl FnOnce(slenderflow_core::Error) -> Self {
        let context = context.into();
        move |source| CliError::Solver { context, source }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
