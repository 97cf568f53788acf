use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] proxlab::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use proxlab::Error as E;
        match self {
            CliError::Core(E::Budget { .. }) => 2,
            CliError::Core(E::ClaimFalsified(_) | E::Certificate(_) | E::Construction(_)) => 1,
            CliError::Core(_) | CliError::Io { .. } | CliError::Json(_) | CliError::Usage(_) => 3,
            CliError::Csv(_) => 1,
        }
    }
}
