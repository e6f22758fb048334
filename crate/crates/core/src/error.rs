use thiserror::Error;

/// Library-wide error type. The variants map onto the CLI exit codes:
/// `Config` -> 2, `Regime` -> 3, everything else -> 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration or parameter set (rejected before any simulation runs).
    #[error("config error: {0}")]
    Config(String),
    /// Input is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested physical regime is not the one the model supports.
    #[error("regime error: {0}")]
    Regime(String),
    /// A numerical procedure failed (instability, drift check, node hit, no convergence).
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Regime(_) => 3,
            Error::Domain(_) | Error::Numeric(_) | Error::Io(_) => 4,
        }
    }

    /// True when the failure reports a wavefunction node (phase undefined there).
    pub fn is_node(&self) -> bool {
        matches!(self, Error::Numeric(msg) if msg.starts_with("node"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
