use maxwell_core::DomainError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] maxwell_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid keyframe file: {0}")]
    Keyframes(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<DomainError> for HarnessError {
    fn from(e: DomainError) -> Self {
        HarnessError::Core(e.into())
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
