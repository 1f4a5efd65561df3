use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Numerical(#[from] opangle_core::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failing properties: {}", .0.join(", "))]
    PropertiesFailed(Vec<String>),
    #[error("precondition violated: M is contained in N, so the gap is undefined")]
    SubspaceContained,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Write { .. } => 4,
            CliError::PropertiesFailed(_) => 5,
            CliError::SubspaceContained => 6,
        }
    }
}
