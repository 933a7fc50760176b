use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("codebook capacity exceeded: 2^{requested} entries requested, guard allows at most 2^{guard}")]
    CapacityExceeded { requested: u32, guard: u32 },

    #[error("insufficient training data: need at least {needed} samples, got {got}")]
    InsufficientTraining { needed: usize, got: usize },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("solver failed: {0}")]
    SolverFailure(String),

    #[error("quadrature did not reach the requested tolerance")]
    QuadratureFailure,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
