//! Failure classes of the command-line front end and their exit codes.

use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for invalid flags, unknown ids and unusable inputs.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for numerical failures (no convergence, exceptional points, …).
pub const EXIT_NUMERICAL: i32 = 3;
/// Exit code for file-system and serialization failures.
pub const EXIT_IO: i32 = 4;

/// Everything that can stop a `probelab` run.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] nhse_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl LabError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage(_) => EXIT_USAGE,
            LabError::Core(
                nhse_core::Error::InvalidInput(_)
                | nhse_core::Error::DegenerateInput(_)
                | nhse_core::Error::UnsupportedModel(_),
            ) => EXIT_USAGE,
            LabError::Core(_) => EXIT_NUMERICAL,
            LabError::Io { .. } | LabError::Serialize(_) => EXIT_IO,
        }
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Serialize(e.to_string())
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Serialize(e.to_string())
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;
