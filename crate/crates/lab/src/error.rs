use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] bis_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal: {0}")]
    Internal(String),
}

impl LabError {
    /// 0 is success; 2 config or usage; 3 a size guard tripped; 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage(_) | LabError::Config(_) => 2,
            LabError::Core(e) if e.is_budget() => 3,
            LabError::Core(_) => 2,
            LabError::Io(_) | LabError::Internal(_) => 1,
        }
    }
}
