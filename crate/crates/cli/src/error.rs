use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Core(#[from] loctemp_core::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// Process exit code: 3 for capability limits, 2 for everything the
    /// caller can fix by changing the input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(loctemp_core::Error::Capability { .. }) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Takes the bytes out of a finished in-memory CSV writer.
pub fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner()
        .map_err(|e| CliError::Csv(e.into_error().into()))
}
