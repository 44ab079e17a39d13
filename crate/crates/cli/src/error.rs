use thiserror::Error;

/// Failures of a command, each mapped to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error(transparent)]
    Core(#[from] pht_core::Error),
}

impl CliError {
    /// 1 for unreadable or inconsistent input, 2 for violated structural
    /// assumptions, 3 for failed computational preconditions.
    pub fn exit_code(&self) -> u8 {
        use pht_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Assumption(_) => 2,
            CliError::Core(e) => match e {
                E::InvalidInput(_) | E::DimensionMismatch(_) | E::NonFinite => 1,
                E::AssumptionViolated(_) | E::ParityViolated(_) | E::NotHermitian { .. } => 2,
                E::NeitherHermitianNorSkew
                | E::IntervalMismatch
                | E::OrderZero
                | E::DegeneratePencil
                | E::SingularA => 3,
            },
        }
    }
}
