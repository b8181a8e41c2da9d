use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {0} outside 1..={max}", max = crate::MAX_QUBITS)]
    QubitCount(usize),

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("duplicate qubit {0} in gate or register list")]
    DuplicateQubit(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("matrix is not unitary (max |U†U - I| = {0:e})")]
    NonUnitary(f64),

    #[error("matrix is not Hermitian (max |A - A†| = {0:e})")]
    NotHermitian(f64),

    #[error("vector is not an eigenvector (residual {0:e})")]
    NotAnEigenvector(f64),

    #[error("line {line}: {message} (token `{token}`)")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("gate `{0}` has no text representation")]
    Unserializable(String),

    #[error("unknown serial number `{0}`")]
    UnknownSerial(String),

    #[error("singular or ill-conditioned system (condition estimate {0:e})")]
    IllConditioned(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
