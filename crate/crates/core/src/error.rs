use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("arity mismatch: form of order {expected} applied to {got} arguments")]
    ArityMismatch { expected: usize, got: usize },

    #[error("argument is not affine (degree {degree} > 1)")]
    NotAffine { degree: usize },

    #[error("insufficient smoothness: need order {needed}, oracle provides {available}")]
    InsufficientSmoothness { needed: usize, available: usize },

    #[error("empty point list")]
    EmptyPoints,

    #[error("missing jet entry for multi-index {0:?}")]
    MissingJet(Vec<u32>),

    #[error("missing derivative data of order {order} at repeated point {point}")]
    MissingDerivative { point: f64, order: usize },

    #[error("rank deficient evaluation map: expected rank {expected}, observed {observed}")]
    RankDeficient { expected: usize, observed: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not symmetric positive definite")]
    NotSpd,

    #[error("degenerate conditioning: value covariance is singular (reciprocal condition {rcond:e})")]
    DegenerateConditioning { rcond: f64 },

    #[error("derivative order {requested} exceeds kernel limit {limit}")]
    OrderExceeded { requested: usize, limit: usize },

    #[error("covariance not positive semi-definite after jitter (min eigenvalue {min_eig:e})")]
    NotPsd { min_eig: f64 },

    #[error("missing factorial moment for partitions with {blocks} blocks")]
    MissingPartition { blocks: usize },

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI reports and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::NotAffine { .. } => "not_affine",
            Error::InsufficientSmoothness { .. } => "insufficient_smoothness",
            Error::EmptyPoints => "empty_points",
            Error::MissingJet(_) => "missing_jet",
            Error::MissingDerivative { .. } => "missing_derivative",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NotSpd => "not_spd",
            Error::DegenerateConditioning { .. } => "degenerate_conditioning",
            Error::OrderExceeded { .. } => "order_exceeded",
            Error::NotPsd { .. } => "not_psd",
            Error::MissingPartition { .. } => "missing_partition",
            Error::UnknownFunction(_) => "unknown_function",
            Error::InvalidInput(_) => "invalid_input",
        }
    }

    /// True for failures caused by the numerics (degenerate geometry or fields)
    /// rather than malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. } | Error::DegenerateConditioning { .. } | Error::NotPsd { .. } | Error::NotSpd
        )
    }
}

/// Non-fatal diagnostics attached to results.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum Warning {
    /// Sampling grid too coarse: a cell holds more than one sign change.
    Resolution { cells: usize },
    /// Diagonal behaviour of a density looks non-integrable.
    Integrability { fitted_exponent: f64 },
    /// Conditioning broke down below this separation; treated as the stable floor.
    ConditioningFloor { epsilon: f64 },
    /// Newton refinement failed; zero counted through the sign-degree fallback.
    NewtonFallback { cells: usize },
}
