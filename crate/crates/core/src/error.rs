use thiserror::Error;

/// Errors raised by validation, the reductions, and corpus/document loading.
///
/// State numbers carried in variants are 1-based, matching how states are
/// labelled in reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has no states")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("entry ({row}, {col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {state} sums to {sum}, outside the stochasticity tolerance")]
    RowSumOutOfTolerance { state: usize, sum: f64 },
    #[error("holding-time vector has {found} entries, expected {expected}")]
    HoldingTimeLength { expected: usize, found: usize },
    #[error("holding time of state {state} must be positive and finite, got {value}")]
    NonPositiveHoldingTime { state: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chain has {0} closed communicating classes, expected exactly one")]
    MultipleClosedClasses(usize),
    #[error("state {level} cannot leave the censored chain at level {level} (reducible input)")]
    AbsorbingLastState { level: usize },
    #[error("pivot 1 - q({level},{level}) is not positive while solving into state {target}")]
    SingularPivot { target: usize, level: usize },
    #[error("chain is reducible")]
    Reducible,
    #[error("level {level} is outside 1..={states}")]
    LevelOutOfRange { level: usize, states: usize },
    #[error("unknown test problem {0:?}")]
    UnknownProblem(String),
    #[error("test problem {0} has no golden data")]
    NoGoldenData(String),
    #[error("unknown precision {0:?}, expected single or double")]
    UnknownPrecision(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
