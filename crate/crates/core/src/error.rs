use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Numerical routine failed to reach its tolerance. `estimate` is the best
    /// value obtained and `achieved_error` the error estimate attached to it.
    #[error("numeric error: {message} (estimate {estimate:e}, achieved error {achieved_error:e})")]
    Numeric {
        message: String,
        estimate: f64,
        achieved_error: f64,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("data format error: {0}")]
    Format(String),

    #[error("filter error: {0}")]
    Filter(String),

    #[error("optimization error: {0}")]
    Optimization(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
