use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration is internally inconsistent or incompatible with a problem.
    #[error("configuration error: {0}")]
    Config(String),

    /// A data structure violates a structural invariant (e.g. a ranking that
    /// is not a permutation).
    #[error("integrity error: {0}")]
    Integrity(String),

    /// A function evaluation produced a non-finite value.
    #[error("non-finite value at index {index} (iteration {iteration})")]
    NonFinite { index: usize, iteration: usize },

    /// A problem's stated constants failed empirical certification.
    #[error("certification failure for {assumption}: {detail}")]
    Certification { assumption: String, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
