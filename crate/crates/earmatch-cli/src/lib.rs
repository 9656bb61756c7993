pub mod census_run;
pub mod format;

use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{0}")]
    Format(#[from] format::FormatError),
    #[error("{0}")]
    Message(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> CliError {
        CliError::Io { path: path.display().to_string(), err }
    }
}
