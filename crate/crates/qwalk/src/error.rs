use thiserror::Error;

/// Errors reported by state constructors and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematically valid range.
    #[error("domain error: {0}")]
    Domain(String),
    /// A state or profile is not normalized to unit probability.
    #[error("normalization error: {0}")]
    Normalization(String),
    /// A quantity violates an invariant it is required to satisfy.
    #[error("invariant violation: {0}")]
    Invariant(String),
    /// Too few data points for the requested analysis.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// The k-space grid is too coarse for the requested evolution.
    #[error("aliasing: {0}")]
    Aliasing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
