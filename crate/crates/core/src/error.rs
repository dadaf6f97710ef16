use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid game: {0}")]
    Validation(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("path is not edge-connected: no edge {from} -> {to}")]
    NotConnected { from: String, to: String },

    #[error("invalid lasso: {0}")]
    InvalidLasso(String),

    #[error("credit component {value} outside [0, {cap}]")]
    CreditOutOfRange { value: i64, cap: u64 },

    #[error("antichain mismatch: {0}")]
    Mismatch(String),

    #[error("safety limit exceeded: {what} = {size} > {limit}")]
    LimitExceeded { what: &'static str, size: u128, limit: u128 },

    #[error("empty cap schedule")]
    EmptySchedule,

    #[error("cap schedule must be strictly increasing and bounded by the hard cap")]
    BadSchedule,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed strategy: {0}")]
    MalformedStrategy(String),

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("reducible chain: {0}")]
    Reducible(String),

    #[error("mixing probability {0} not in (0, 1); choose a smaller epsilon")]
    GammaOutOfRange(String),

    #[error("{0}")]
    Io(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
