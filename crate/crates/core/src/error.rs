use thiserror::Error;

/// Errors raised when an evaluator's preconditions are violated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("index lists have unequal lengths ({left} vs {right}); pad with zeros first")]
    UnequalLengths { left: usize, right: usize },

    #[error("derivative table too shallow: depth {depth}, need at least {needed}")]
    InsufficientDepth { depth: usize, needed: usize },

    #[error("evaluation points are not pairwise distinct")]
    CoincidentPoints,

    #[error("differencing unstable: spacings disagree by {relative:.3e} relative")]
    Cancellation { relative: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
