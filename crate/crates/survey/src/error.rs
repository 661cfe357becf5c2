use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("{0}")]
    Usage(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}:{line}: {msg}", path.display())]
    RecordFormat { path: PathBuf, line: usize, msg: String },

    #[error("{}:{line}: record for p = {p} fails validation: {source}", path.display())]
    InvalidRecord { path: PathBuf, line: usize, p: String, source: drinfeld_core::Error },

    #[error("record file was written for config hash {found}, current config hashes to {expected}")]
    HashMismatch { found: String, expected: String },

    #[error("prime {p}: {source}")]
    Prime { p: String, source: drinfeld_core::Error },

    #[error(transparent)]
    Core(#[from] drinfeld_core::Error),
}

impl SurveyError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        SurveyError::Io { path: path.into(), source }
    }

    /// 1 for mathematical consistency failures, 2 for everything the caller
    /// can fix by changing arguments or inputs.
    pub fn exit_code(&self) -> u8 {
        match self {
            SurveyError::InvalidRecord { .. } | SurveyError::Prime { .. } => 1,
            SurveyError::Core(e) if is_consistency(e) => 1,
            _ => 2,
        }
    }
}

fn is_consistency(e: &drinfeld_core::Error) -> bool {
    use drinfeld_core::Error::*;
    matches!(e, Consistency { .. } | InconsistentCharpoly { .. })
}

pub type Result<T, E = SurveyError> = std::result::Result<T, E>;
