use std::path::PathBuf;

use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(boltzwave_core::Error),
    #[error("numerical abort: {0}")]
    Numerical(boltzwave_core::Error),
    #[error("checks failed: {}", .0.join(", "))]
    Checks(Vec<String>),
    #[error("warnings are fatal under --strict: {}", .0.join("; "))]
    Strict(Vec<String>),
}

impl From<boltzwave_core::Error> for LabError {
    fn from(e: boltzwave_core::Error) -> Self {
        use boltzwave_core::Error as E;
        match e {
            E::InvalidInput(_) | E::EmptyWindow { .. } | E::GridMismatch => LabError::Input(e),
            _ => LabError::Numerical(e),
        }
    }
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Checks(_) | LabError::Strict(_) => 1,
            LabError::Usage(_) | LabError::Syntax { .. } | LabError::Read { .. } | LabError::Input(_) => 2,
            LabError::Numerical(_) => 3,
            LabError::Io(_) | LabError::Json(_) => 3,
        }
    }

    /// Short tag for the manifest's status field.
    pub fn status(&self) -> &'static str {
        match self.exit_code() {
            1 => "check-failed",
            2 => "usage-error",
            _ => "aborted",
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;
