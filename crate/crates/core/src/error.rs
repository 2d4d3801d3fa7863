use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("slope {0} is not a contraction (|slope| must be < 1)")]
    NotContracting(String),
    #[error("branch {0} has zero slope; branches must be injective")]
    ZeroSlope(usize),
    #[error("an IFS needs at least two branches, got {0}")]
    TooFewBranches(usize),
    #[error("breakpoints must be strictly increasing")]
    UnsortedBreakpoints,
    #[error("{branches} branches need {expected} breakpoints, got {got}")]
    BreakpointCount {
        branches: usize,
        expected: usize,
        got: usize,
    },
    #[error("itinerary words must be nonempty")]
    EmptyWord,
    #[error("symbol {symbol} out of range 1..={k}")]
    SymbolOutOfRange { symbol: usize, k: usize },
    #[error("cannot parse number `{0}`")]
    Parse(String),
    #[error("Hausdorff dimension must be positive and finite, got {0}")]
    NonPositiveDimension(f64),
    #[error("circle map has slope 0: the exceptional set is empty")]
    ZeroSlopeCircle,
    #[error("circle map breakpoints must lie strictly inside (0, 1) and increase")]
    CircleBreakpoints,
    #[error("circle map with {intervals} intervals needs {intervals} intercepts, got {got}")]
    InterceptCount { intervals: usize, got: usize },
    #[error("rotation {delta} lies outside the reduction window (-{ell}, {ell})")]
    OutsideWindow { delta: String, ell: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
