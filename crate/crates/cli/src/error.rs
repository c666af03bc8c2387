//! CLI error taxonomy and exit codes: 2 for configuration problems, 3 for
//! numerical preconditions (ill-conditioned τ, boundary overflow, poles),
//! 1 for I/O.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical precondition: {0}")]
    Numerical(weakvel::Error),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<weakvel::Error> for CliError {
    fn from(e: weakvel::Error) -> Self {
        match e {
            weakvel::Error::IllConditioned { .. }
            | weakvel::Error::Pole { .. }
            | weakvel::Error::Boundary { .. } => CliError::Numerical(e),
            // mismatched bases/grids and domain violations trace back to the
            // configuration
            other => CliError::Config(other.to_string()),
        }
    }
}
