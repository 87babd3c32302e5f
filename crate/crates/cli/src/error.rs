use gpt_phase::Error as CoreError;

pub const EXIT_OK: i32 = 0;
/// A theorem check ran and did not hold.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Malformed theory file; the message carries line and column.
    #[error("{0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) | CliError::Io { .. } => EXIT_INVALID,
            CliError::Core(e) => match e {
                CoreError::BudgetExceeded { .. } => EXIT_BUDGET,
                CoreError::UnknownTheory(_) | CoreError::UnknownMeasurement(_) | CoreError::Unsupported(_) => {
                    EXIT_USAGE
                }
                _ => EXIT_INVALID,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
