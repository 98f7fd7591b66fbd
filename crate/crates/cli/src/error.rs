use thiserror::Error;

/// Failure of a subcommand, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or unreadable input (exit 2).
    #[error("input error: {0}")]
    Input(String),
    /// Valid input the model cannot satisfy (exit 1).
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<sve_core::Error> for CliError {
    fn from(err: sve_core::Error) -> Self {
        if err.is_input_error() {
            CliError::Input(err.to_string())
        } else {
            CliError::Domain(err.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
