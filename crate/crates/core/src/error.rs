use num_bigint::BigInt;
use num_rational::BigRational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("depth exceeded: quotient a_{requested} requested but only {available} available")]
    DepthExceeded { requested: usize, available: usize },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// A fold point of the nearest-integer distance lies strictly inside the interval.
    #[error("interval straddles an integer or half-integer; retry at a smaller width")]
    AmbiguousFold,

    #[error("no convergent denominator in the window [{lo}, {hi}]")]
    WindowEmpty { lo: BigInt, hi: BigInt },

    #[error("invalid omega pattern: {0}")]
    InvalidPattern(String),

    #[error("requested {requested} alphas but the word only has {available}")]
    NotEnoughAlphas { requested: usize, available: usize },

    #[error("omega word of length {len} is shorter than the required {needed}")]
    WordTooShort { needed: BigInt, len: usize },

    #[error("separation failed at l = {l}: pair (j = {j}, j' = {j_prime}) has distance < {threshold} (certified upper bound {upper})")]
    SeparationFailed {
        l: usize,
        j: u64,
        j_prime: u64,
        threshold: Box<BigRational>,
        upper: Box<BigRational>,
    },

    #[error("point {index} straddles a grid arc boundary")]
    AmbiguousMembership { index: usize },

    #[error("degenerate box-count sample: {0}")]
    DegenerateSample(String),

    #[error("inadmissible parameters: 2*tau1 >= tau2 + 2 (tau1 = {tau1}, tau2 = {tau2})")]
    InadmissibleParams { tau1: String, tau2: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn exhausted(what: impl Into<String>) -> Self {
        Error::PrecisionExhausted(what.into())
    }

    /// Depth errors surface as precision exhaustion in certified loops.
    pub(crate) fn into_exhausted(self, ctx: &str) -> Self {
        match self {
            Error::DepthExceeded {
                requested,
                available,
            } => Error::PrecisionExhausted(format!(
                "{ctx}: needed a_{requested}, only {available} quotients available"
            )),
            other => other,
        }
    }
}
