use std::path::PathBuf;

use thiserror::Error;

use crate::oracle::OracleError;

#[derive(Debug, Error)]
pub enum LabError {
    /// Bad flags, malformed plans, inconsistent parameters.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] hartree_core::Error),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl LabError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| LabError::Io { path, source }
    }

    /// 2 for configuration problems, 1 for anything that failed while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Core(hartree_core::Error::InvalidParameter { .. })
            | LabError::Core(hartree_core::Error::Config(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
