use thiserror::Error;

use crate::congruence::CongruenceCertificate;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("partition is not a congruence: {0}")]
    NotCongruence(Box<CongruenceCertificate>),

    #[error(
        "algebra has {size} elements, above the exhaustive cap of {cap}; use principal-only mode"
    )]
    AboveCap { size: usize, cap: usize },

    #[error("{what} exceeded the budget of {cap}")]
    Budget { what: &'static str, cap: u64 },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::AboveCap { .. } | Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
