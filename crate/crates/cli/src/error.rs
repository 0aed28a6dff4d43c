use std::fmt;

use qherm_core::Error as CoreError;

/// Process exit statuses.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const FAIL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const BUDGET: u8 = 3;
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable inputs, invalid parameters.
    Usage(String),
    /// A library error, classified by [`CliError::exit_code`].
    Core(CoreError),
    /// A check ran and did not hold.
    Failed(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => exit::USAGE,
            CliError::Failed(_) => exit::FAIL,
            CliError::Core(e) => match e {
                CoreError::Budget { .. } => exit::BUDGET,
                CoreError::NotMinimal { .. }
                | CoreError::NotQualified
                | CoreError::InconsistentShares
                | CoreError::ReducibleModulus { .. }
                | CoreError::NonPrimitiveModulus { .. } => exit::FAIL,
                _ => exit::USAGE,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
