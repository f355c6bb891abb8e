use num_rational::BigRational;
use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested construction does not exist for these parameters
    /// (for example, the fixed point chi/2 is not in the localised ring).
    #[error("not available: {0}")]
    NotAvailable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("collision between strands {first} and {second} at time {time}")]
    Collision {
        time: BigRational,
        first: usize,
        /// `None` means the strand hits the puncture.
        second: CollisionPartner,
    },

    #[error("loop does not close: {0}")]
    NotClosed(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("builder failure: {0}")]
    BuilderFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionPartner {
    Strand(usize),
    Puncture,
}

impl std::fmt::Display for CollisionPartner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CollisionPartner::Strand(i) => write!(f, "{i}"),
            CollisionPartner::Puncture => write!(f, "puncture"),
        }
    }
}

impl Error {
    /// Short machine-readable tag, used by the command-line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::NotAvailable(_) => "not-available",
            Error::Unsupported(_) => "unsupported",
            Error::Collision { .. } => "collision",
            Error::NotClosed(_) => "not-closed",
            Error::Range(_) => "range",
            Error::BuilderFailure(_) => "builder-failure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
