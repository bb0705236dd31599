use thiserror::Error;

/// Errors raised by the calculus, bound evaluators, models and empirics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{requested} coordinates exceed the cap of {cap}{}", hint.as_ref().map(|h| format!(" ({h})")).unwrap_or_default())]
    CapExceeded {
        requested: usize,
        cap: usize,
        hint: Option<String>,
    },
    #[error("probability {value} at coordinate {index} is not in the open interval (0, 1)")]
    BadProbability { index: usize, value: f64 },
    #[error("coordinate index {index} out of range for a space of {m} coordinates")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("functionals live on different spaces")]
    SpaceMismatch,
    #[error("chaos order {order} exceeds dimension {m}")]
    OrderExceedsDimension { order: usize, m: usize },
    #[error("semigroup time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("functional is not standardized: mean {mean:e}, variance {variance}")]
    NotStandardized { mean: f64, variance: f64 },
    #[error("functional has chaos mass {outside:e} outside level {order}")]
    NotPureChaos { order: usize, outside: f64 },
    #[error("statistic has zero variance")]
    ZeroVariance,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree {d} >= 1 requires an explicit rate regime")]
    RegimeUnspecified { d: usize },
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("empty sample batch")]
    EmptyBatch,
    #[error("rate fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("rate point at n = {n} has nonpositive d_K {dk}")]
    NonpositiveDk { n: f64, dk: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
