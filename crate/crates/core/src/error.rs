use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("guard exceeded: {what} (limit {limit}, reached {reached})")]
    GuardExceeded {
        what: String,
        limit: usize,
        reached: usize,
    },

    /// A check that must hold by theory failed. Never expected on valid input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    /// A named step of the Kummer-formation argument failed on the supplied data.
    #[error("{step} failed: {detail}")]
    StepFailed { step: String, detail: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn guard(what: impl Into<String>, limit: usize, reached: usize) -> Self {
        Error::GuardExceeded {
            what: what.into(),
            limit,
            reached,
        }
    }

    pub fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }

    pub fn step(step: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::StepFailed {
            step: step.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
