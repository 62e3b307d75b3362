use thiserror::Error;

/// Errors produced by the set, family, compression and search layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Parameters outside the supported range (n = 0, n > 64, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A set or element list that is not well formed for its ground set.
    #[error("malformed input: {0}")]
    Input(String),

    /// The operation is only defined for k >= 1.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A precondition of the compression step does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The instance is larger than the chosen method accepts.
    #[error("capacity exceeded: {vertices} vertices, method limit is {cap}")]
    Capacity { vertices: usize, cap: usize },

    #[error("binomial({0}, {1}) does not fit in 64 bits")]
    Overflow(i64, i64),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
