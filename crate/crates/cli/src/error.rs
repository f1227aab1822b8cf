use std::path::PathBuf;

use thiserror::Error;

/// Exit code for malformed input files.
pub const EXIT_PARSE: i32 = 2;
/// Exit code for an unrecognized algorithm name.
pub const EXIT_UNKNOWN_ALGORITHM: i32 = 3;
/// Exit code when the solver only found infeasible placements.
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("unknown algorithm {0:?} (expected lamocs, ga, pso or ffd)")]
    UnknownAlgorithm(String),

    #[error("no feasible placement found")]
    Infeasible,

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] lamocs_core::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::UnknownAlgorithm(_) => EXIT_UNKNOWN_ALGORITHM,
            CliError::Infeasible => EXIT_INFEASIBLE,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
