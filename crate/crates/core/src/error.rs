use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Checked integer arithmetic left the `i64` range.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// Operands do not fit together (parent mismatch, bad argument, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested group or stem is not in the curated tables.
    #[error("{0} is outside the tabulated range")]
    OutOfTabulatedRange(String),

    /// A table annotation needed for the computation is absent.
    #[error("missing table data: {0}")]
    MissingData(String),

    #[error("unknown name `{name}`; available: {available}")]
    UnknownName { name: String, available: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
