use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("ring mismatch: [{left}] vs [{right}]")]
    RingMismatch { left: String, right: String },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The computation did not stabilize within the configured caps. Callers
    /// must treat this as "no answer", never as a wrong answer.
    #[error("inconclusive: {what} (orders tried: {orders:?})")]
    Inconclusive { what: String, orders: Vec<usize> },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn inconclusive(what: impl Into<String>, orders: Vec<usize>) -> Self {
        Error::Inconclusive {
            what: what.into(),
            orders,
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive { .. })
    }
}
