use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("enumeration too large: {what} needs {size} elements, cap is {cap}")]
    EnumerationTooLarge { what: String, size: String, cap: u128 },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structure transport failed: {0}")]
    StructureTransport(String),

    /// A computed object failed an internal consistency check that must hold
    /// for every correct implementation.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub fn too_large(what: impl Into<String>, size: impl std::fmt::Display, cap: u128) -> Self {
        Error::EnumerationTooLarge {
            what: what.into(),
            size: size.to_string(),
            cap,
        }
    }

    pub fn is_too_large(&self) -> bool {
        matches!(self, Error::EnumerationTooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
