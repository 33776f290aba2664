use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The instance is larger than an exact method supports.
    #[error("capability error: {what} exceeds limit {limit} (got {got})")]
    Capability { what: &'static str, limit: usize, got: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
