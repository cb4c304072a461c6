use alloc::string::String;

/// Errors raised by constructors and rate computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid labels: {0}")]
    InvalidLabels(&'static str),
    #[error("alphabet has no binary labels")]
    Unlabeled,
    #[error("missing signal points")]
    MissingSignalPoints,
    #[error("{what}: expected {expected} entries, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid probability {value} at index {index}")]
    InvalidProbability { index: usize, value: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("channel row {row} sums to {sum}, expected 1")]
    RowNotNormalized { row: usize, sum: f64 },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(&'static str),
    #[error("`{name}` = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("bit level {level} out of range for {bits}-bit labels")]
    LevelOutOfRange { level: usize, bits: usize },
    #[error("bit level {0} is degenerate: one bit value has probability zero")]
    DegenerateLevel(usize),
    #[error("invalid metric entry {value} at ({row}, {col})")]
    InvalidMetricEntry { row: usize, col: usize, value: f64 },
    #[error("metric column {0} has no positive entry")]
    ZeroColumn(usize),
    #[error("alphabet is not the {0}-fold product of the scalar alphabet")]
    NotProduct(usize),
    #[error("search bracket [{lo}, {hi}] is empty")]
    EmptyBracket { lo: f64, hi: f64 },
    #[error("weight r must be positive on the support (symbol {0})")]
    NonPositiveWeight(usize),
    #[error("symbol index {index} out of range for alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },
    #[error("rate perspectives disagree: {0} vs {1}")]
    PerspectiveMismatch(f64, f64),
    #[error("infeasible simulation: {0}")]
    Infeasible(String),
}

pub type Result<T> = core::result::Result<T, Error>;
