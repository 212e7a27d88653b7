use thiserror::Error;

/// Errors raised by the library. Every variant describes bad input or a
/// refused computation; none of them indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown surface token `{0}` (expected P2, P1xP1 or S1..S8)")]
    UnknownSurface(String),

    #[error("divisor class has {found} coordinates but the surface has Picard rank {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed divisor class `{0}`")]
    MalformedClass(String),

    #[error("formula not certified for this class: {0}")]
    NotCertified(String),

    #[error("basis is singular or has the wrong length")]
    SingularBasis,

    #[error("class is not in the effective cone")]
    NotEffective,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
