use thiserror::Error;

/// Errors raised by profile construction and by the measures themselves.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MobilityError {
    #[error("status vectors differ in length: u has {u}, v has {v}")]
    LengthMismatch { u: usize, v: usize },
    #[error("a profile needs at least 2 histories, got {0}")]
    TooSmall(usize),
    #[error("non-finite status value at position {index}")]
    NonFinite { index: usize },
    #[error("log status requires strictly positive values (position {index} is {value})")]
    NonPositiveForLog { index: usize, value: f64 },
    #[error("origin status has zero variance")]
    DegenerateOrigin,
    #[error("status has zero variance in at least one period")]
    DegenerateVariance,
    #[error("inequality-weighted denominator is zero")]
    ZeroDenominator,
    #[error("income must be strictly positive (position {index} is {value})")]
    NonPositiveIncome { index: usize, value: f64 },
    #[error("sensitivity parameter {0} is outside the admissible range")]
    BadAlpha(f64),
    #[error("origin status of mover {index} must be strictly positive")]
    NonPositiveOrigin { index: usize },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("alpha_tilde must differ from 0 and 1, got {0}")]
    BadAlphaTilde(f64),
    #[error("mean status is zero; the scale-normalised distance is undefined")]
    ZeroMean,
    #[error("gamma must be 0 or odd, got {0}")]
    EvenGamma(i64),
    #[error("gamma must be non-negative, got {0}")]
    NegativeGamma(i64),
    #[error("gamma = {gamma} is not supported with {context}")]
    UnsupportedGamma { gamma: u32, context: &'static str },
    #[error("partition has an empty upward or downward group")]
    DegeneratePartition,
    #[error("subgroup partition covers {got} histories, profile has {expected}")]
    PartitionLength { expected: usize, got: usize },
    #[error("replication factor must be at least 1")]
    BadReplication,
    #[error("{count} downward movers out of {n} is not a valid split")]
    BadDownwardCount { count: usize, n: usize },
    #[error("empty distribution")]
    EmptyDistribution,
}

impl MobilityError {
    /// Stable machine-readable name, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            MobilityError::LengthMismatch { .. } => "LengthMismatch",
            MobilityError::TooSmall(_) => "TooSmall",
            MobilityError::NonFinite { .. } => "NonFinite",
            MobilityError::NonPositiveForLog { .. } => "NonPositiveForLog",
            MobilityError::DegenerateOrigin => "DegenerateOrigin",
            MobilityError::DegenerateVariance => "DegenerateVariance",
            MobilityError::ZeroDenominator => "ZeroDenominator",
            MobilityError::NonPositiveIncome { .. } => "NonPositiveIncome",
            MobilityError::BadAlpha(_) => "BadAlpha",
            MobilityError::NonPositiveOrigin { .. } => "NonPositiveOrigin",
            MobilityError::DomainError(_) => "DomainError",
            MobilityError::BadAlphaTilde(_) => "BadAlphaTilde",
            MobilityError::ZeroMean => "ZeroMean",
            MobilityError::EvenGamma(_) => "EvenGamma",
            MobilityError::NegativeGamma(_) => "NegativeGamma",
            MobilityError::UnsupportedGamma { .. } => "UnsupportedGamma",
            MobilityError::DegeneratePartition => "DegeneratePartition",
            MobilityError::PartitionLength { .. } => "PartitionLength",
            MobilityError::BadReplication => "BadReplication",
            MobilityError::BadDownwardCount { .. } => "BadDownwardCount",
            MobilityError::EmptyDistribution => "EmptyDistribution",
        }
    }
}

pub type Result<T> = std::result::Result<T, MobilityError>;
