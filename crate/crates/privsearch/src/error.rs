use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] privsearch_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        use privsearch_core::Error as E;
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Core(E::RegimeViolation(_) | E::MissingField(_) | E::ExampleNotFound(_)) => 2,
            HarnessError::Core(E::UnsupportedAttack(_) | E::NoCloneStructure { .. } | E::InsufficientLength { .. }) => 2,
            HarnessError::Io(_) => 2,
            _ => 1,
        }
    }
}

pub fn config_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
