use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register size {0} outside supported range 1..={max}", max = crate::qstate::MAX_QBITS)]
    RegisterSize(usize),

    #[error("expected {expected} amplitudes, got {actual}")]
    AmplitudeCount { expected: usize, actual: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("Q-bit index {index} outside register of {n_qbits} Q-bits")]
    QbitOutOfRange { index: usize, n_qbits: usize },

    #[error("dimension mismatch: {left} vs {right} Q-bits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid bipartition cut {cut} for {n_qbits} Q-bits")]
    InvalidCut { cut: usize, n_qbits: usize },

    #[error("keep-set must not be empty")]
    EmptyKeepSet,

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("XOR target and control must differ (both {0})")]
    SameTargetControl(usize),

    #[error("oracle acts on exactly 2 Q-bits, register has {0}")]
    OracleRegister(usize),

    #[error("invalid environment model: {0}")]
    InvalidEnvironment(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed state JSON: {0}")]
    Json(String),
}
