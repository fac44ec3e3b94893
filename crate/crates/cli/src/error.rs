use std::path::PathBuf;

use thiserror::Error;

/// Errors bucketed by exit code: usage and parse problems exit 2, runtime
/// failures exit 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("script error: {0}")]
    ScriptParse(epgm_grala::GralaError),

    #[error("script failed: {0}")]
    ScriptRuntime(epgm_grala::GralaError),

    #[error("{path}:{row}: {message}")]
    ImportRow {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("store error: {0}")]
    Store(#[from] epgm_store::StoreError),

    #[error("data error: {0}")]
    Model(#[from] epgm_model::ModelError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::ScriptParse(_) => 2,
            _ => 1,
        }
    }
}

impl From<epgm_grala::GralaError> for CliError {
    fn from(e: epgm_grala::GralaError) -> Self {
        if e.is_syntactic() {
            CliError::ScriptParse(e)
        } else {
            CliError::ScriptRuntime(e)
        }
    }
}
