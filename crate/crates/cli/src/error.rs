use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] salemfield::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 = usage or parameter error, 2 = invariant failure, 3 = cap exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(salemfield::Error::CapExceeded { .. }) => 3,
            CliError::Core(salemfield::Error::NumericalIntegrity { .. }) => 2,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
