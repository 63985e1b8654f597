use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its physical domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),
    /// The requested dense realization would be too large.
    #[error("capability exceeded: {what} needs {requested}, limit is {limit}")]
    Capability {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    /// Shapes of spectra, states and bonds do not fit together.
    #[error("structural mismatch: {0}")]
    Structure(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }
}
