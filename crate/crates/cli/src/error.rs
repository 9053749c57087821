use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("fixture error: {0}")]
    Fixture(#[source] tvha_core::Error),

    #[error("{path}: unrecognized CSV schema ({msg})")]
    Schema { path: PathBuf, msg: String },

    #[error("{failed} of {total} grid points failed")]
    Partial { failed: usize, total: usize },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Core(#[from] tvha_core::Error),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Csv { path, source }
    }

    /// Process exit status: 2 config, 3 fixture, 4 partial failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Schema { .. } => 2,
            CliError::Fixture(_) => 3,
            CliError::Partial { .. } => 4,
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Core(_) => 1,
        }
    }
}
