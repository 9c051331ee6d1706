use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("outcome has zero probability (p = {0:e})")]
    ZeroProbability(f64),

    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("orientation {0} rad is not part of the trine")]
    OrientationNotInTrine(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("chi-square: every cell was pooled away")]
    AllCellsPooled,

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
