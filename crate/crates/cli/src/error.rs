use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("claim failure: {0}")]
    Claim(String),
    #[error(transparent)]
    Core(#[from] dispersion_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CLAIM_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

impl CliError {
    /// 1 for a failed assertion or claim, 2 for everything the user must fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Claim(_) => EXIT_CLAIM_FAILURE,
            CliError::Core(dispersion_core::Error::Claim2Violated { .. }) => EXIT_CLAIM_FAILURE,
            _ => EXIT_CONFIG,
        }
    }
}
