use std::path::PathBuf;

use factional_core::Error as CoreError;

/// Everything the binary can fail with, mapped onto exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("promise outcome is Null at mu_star = {0}")]
    PromiseNull(String),
}

impl CliError {
    pub fn parse(origin: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            origin: origin.into(),
            message: message.into(),
        }
    }

    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// 2 for bad input, 3 for exhausted budgets, 4 for a strict Null.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::BudgetExceeded { .. }) | CliError::Core(CoreError::SpaceTooLarge { .. }) => 3,
            CliError::PromiseNull(_) => 4,
            _ => 2,
        }
    }

    /// Extra line printed after the error, if any.
    pub fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Core(CoreError::MislabeledStates(_)) => {
                Some("hint: swap the order of the two states, or pass --auto-relabel")
            }
            _ => None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
