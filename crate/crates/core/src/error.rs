use thiserror::Error;

/// Errors raised by the arithmetic and L-function layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    ZeroInput,
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("s = {s} is not a critical point: {reason}")]
    NotCritical { s: i64, reason: String },
    #[error("weight {0} is not supported here")]
    BadWeight(i64),
    #[error("index {index} outside the computed range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("coefficient at index {index} is not {ell}-integral")]
    NonIntegralCoefficient { index: usize, ell: u64 },
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("unit group of order {unit_order} does not divide the exponent {u}")]
    UnitObstruction { unit_order: u32, u: i64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not enough Dirichlet coefficients: need {needed}, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },
    #[error("weight of the first form ({0}) must exceed the weight of the second ({1})")]
    WeightOrder(i64, i64),
    #[error("root number unknown; solve it first")]
    RootNumberUnknown,
    #[error("functional equation inconsistent (residual {residual})")]
    Inconsistent { residual: String },
    #[error("continued-fraction recognition failed for {value}")]
    RecognitionFailed { value: String },
    #[error("level {0} is not supported")]
    UnsupportedLevel(u64),
    #[error("unsupported local datum: {0}")]
    UnsupportedLocalDatum(String),
    #[error("eta is not known to be a unit: {0}")]
    EtaNotUnit(String),
    #[error("invalid configuration: {}", .0.join("; "))]
    ConfigInvalid(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
