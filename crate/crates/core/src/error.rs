use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parquet error: {0}")]
    Parquet(#[from] parquet::errors::ParquetError),

    #[error("http error: {0}")]
    Http(String),

    /// Remote endpoint answered with a non-success status.
    #[error("http status {status}: {message}")]
    Status { status: u16, message: String },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("lifecycle violation: {0}")]
    Lifecycle(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("backend error: {0}")]
    Backend(String),
}

impl Error {
    /// True for failures worth retrying (transport errors and 5xx).
    pub fn is_transient(&self) -> bool {
        match self {
            Error::Http(_) => true,
            Error::Status { status, .. } => *status >= 500 || *status == 429,
            _ => false,
        }
    }
}

impl From<reqwest::Error> for Error {
    fn from(e: reqwest::Error) -> Self {
        match e.status() {
            Some(s) => Error::Status {
                status: s.as_u16(),
                message: e.to_string(),
            },
            None => Error::Http(e.to_string()),
        }
    }
}
