use std::path::PathBuf;

use sc_blaschke::{BlaschkeError, BoundsError, PrevertexError, ScmapError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid spec: {0}")]
    Blaschke(#[from] BlaschkeError),
    #[error("invalid spec: {0}")]
    Spec(#[from] PrevertexError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Scmap(#[from] ScmapError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Inadmissible = 2,
    VerificationFailed = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}
