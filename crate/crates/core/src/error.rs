use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid noise variance {0}: must be finite and strictly positive")]
    InvalidNoise(f64),

    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),

    #[error("invalid cocktail parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}-D symbols, got {actual}-D")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A quantity needed as a divisor underflowed to zero.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for errors caused by bad caller input rather than numeric breakdown.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Numeric(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
