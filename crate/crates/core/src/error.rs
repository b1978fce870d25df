use thiserror::Error;

/// Errors produced by the stabscope library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid qubit count {0}")]
    InvalidQubitCount(usize),

    #[error("Weyl index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: u64, n: usize },

    #[error("{what} needs {n} qubits but the configured cap is {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("expected a {expected} table, got a {found} table")]
    WrongTableKind { expected: &'static str, found: &'static str },

    #[error("distribution table is not normalized (sum = {sum})")]
    UnnormalizedTable { sum: f64 },

    #[error("eta computation paths disagree: {detail}")]
    PathDisagreement { detail: String },

    #[error("sample count {m} exceeds the iteration cap {cap}; pass an explicit override")]
    IterationCap { m: u64, cap: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
