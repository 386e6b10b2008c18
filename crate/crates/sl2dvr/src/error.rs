//! Error type shared by every module of the library.

use thiserror::Error;

/// Failures reported by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A ring, character or command configuration that the engine does not support.
    #[error("configuration error: {0}")]
    Config(String),
    /// An enumeration would exceed the configured size limit.
    #[error("capacity exceeded: {what} needs {size}, limit is {limit}")]
    Capacity {
        /// What was being enumerated.
        what: String,
        /// Requested size.
        size: u64,
        /// Configured limit.
        limit: u64,
    },
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A mathematical invariant that must hold was found violated.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// Parameters fall outside the range where a closed form is proved.
    #[error("out of theorem range: {0}")]
    OutOfRange(String),
    /// A search that cannot fail for valid input did fail.
    #[error("internal error: {0}")]
    Internal(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
