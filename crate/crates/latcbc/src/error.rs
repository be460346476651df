use thiserror::Error;

/// Errors reported by construction and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("z = {z} is not a unit modulo {n}")]
    NotCoprime { z: u64, n: u64 },

    #[error("dimension {0} exceeds the brute-force limit of {1}")]
    DimensionLimit(usize, usize),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
