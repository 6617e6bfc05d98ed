use thiserror::Error;

/// Failures surfaced by the certifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GhzError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A state vector or LHV search space would exceed the configured bound.
    #[error("resource limit exceeded: {what} needs {required} but the bound is {bound}")]
    ResourceLimit {
        what: &'static str,
        required: u128,
        bound: u128,
    },

    /// Two independent routes to the same fact disagree. Signals a bug, not physics.
    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
}

pub type Result<T> = std::result::Result<T, GhzError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(GhzError::InvalidArgument(msg.into()))
}
