use thiserror::Error;

/// Errors raised by state construction, channel validation and the protocols.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QilError {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("total dimension {total} exceeds the configured maximum {max}")]
    DimensionOverflow { total: usize, max: usize },
    #[error("invalid dimension {0} (must be at least 1)")]
    InvalidDimension(usize),
    #[error("registry must contain at least one subsystem")]
    EmptyRegistry,
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("label selection must be nonempty")]
    EmptySelection,
    #[error("label sets overlap on `{0}`")]
    OverlappingLabels(String),
    #[error("matrix is not unitary (max deviation from identity {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank {rank} out of range 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("Kraus operators violate completeness (max deviation {deviation:.3e})")]
    KrausIncomplete { deviation: f64 },
    #[error("Kraus list is empty or has inconsistent shapes: {0}")]
    KrausShape(String),
    #[error("unknown channel preset `{0}`")]
    UnknownPreset(String),
    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QilError>;
