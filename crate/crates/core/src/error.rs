use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("size mismatch: {0} points vs {1} points")]
    SizeMismatch(usize, usize),

    #[error("point cloud must contain at least one point")]
    EmptyCloud,

    #[error("non-finite coordinate at point {0}")]
    NonFinite(usize),

    #[error("brute force limited to n <= {max}, got n = {n}")]
    TooLargeForBruteForce { n: usize, max: usize },

    #[error("expected one-dimensional data, got dimension {0}")]
    NotUnivariate(usize),

    #[error("alpha = {alpha} with {count} draws selects no order statistic (floor(count * alpha) = 0)")]
    AlphaTooSmall { alpha: f64, count: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("density must be positive at y = {0}")]
    NonPositiveDensity(f64),

    #[error("membership test requires a monotone interval correspondence")]
    NonMonotone,
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
