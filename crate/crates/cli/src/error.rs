use chafee_core::equilibria::EquilibriumError;
use chafee_core::stability::StabilityError;
use chafee_core::timestepping::TimestepError;

pub const EXIT_UNSUCCESSFUL: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_INVASIVE: u8 = 3;
pub const EXIT_BLOWUP: u8 = 4;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_IO: u8 = 74;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("{0}")]
    Invasive(String),
    #[error("{0}")]
    Blowup(String),
    /// The command ran but its goal was not met (not stabilized, check failed).
    #[error("{0}")]
    Unsuccessful(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Invasive(_) => EXIT_INVASIVE,
            CliError::Blowup(_) => EXIT_BLOWUP,
            CliError::Unsuccessful(_) => EXIT_UNSUCCESSFUL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<EquilibriumError> for CliError {
    fn from(e: EquilibriumError) -> Self {
        CliError::Solver(e.to_string())
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        CliError::Invasive(e.to_string())
    }
}

impl From<TimestepError> for CliError {
    fn from(e: TimestepError) -> Self {
        match e {
            TimestepError::Blowup { .. } => CliError::Blowup(e.to_string()),
            TimestepError::Initial(inner) => inner.into(),
            TimestepError::DegenerateWindow { .. } | TimestepError::NonPositiveDistance { .. } => {
                CliError::Solver(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}
