use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("budget exceeded: {what} needs {needed} but the limit is {limit}")]
    Budget {
        what: &'static str,
        needed: String,
        limit: String,
    },

    #[error("unbounded search: {0}")]
    UnboundedSearch(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("claim falsified: {0}")]
    ClaimFalsified(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
