use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("nonfocusing nonlinearity: max of g on the unit sphere is {g_max}, expected > 0")]
    Nonfocusing { g_max: f64 },

    #[error("optimizer failed: {0}")]
    Optimizer(String),

    #[error("shooting bracket not found in [{lo}, {hi}]")]
    BracketNotFound { lo: f64, hi: f64 },

    #[error("requested tolerance {tol} is below the resolution floor {floor}")]
    Resolution { tol: f64, floor: f64 },

    #[error(
        "box too small: profile boundary/peak ratio {ratio:.3e} exceeds {max_ratio:.3e} \
         (enlarge the box or raise omega)"
    )]
    Truncation { ratio: f64, max_ratio: f64 },

    #[error("invalid ground-state spec: {0}")]
    InvalidGroundState(String),

    #[error("non-finite field values encountered")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("checkpoint format error: {0}")]
    CheckpointFormat(String),

    #[error("internal consistency check failed: {0}")]
    InternalCheck(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
