use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is malformed (wrong range, non-finite, inconsistent).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The request lies outside the mathematical domain of the method.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a cost or table-extent contract.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("coefficient cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !($cond) {
            return Err($crate::error::Error::$variant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
