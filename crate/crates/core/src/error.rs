use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("gate `{gate}` acts on repeated qubit {qubit}")]
    DuplicateQubit { gate: &'static str, qubit: usize },

    #[error("gate `{gate}` expects {expected} qubit(s), got {got}")]
    QubitCount {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("gate `{gate}` expects {expected} parameter(s), got {got}")]
    ParamCount {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("invalid unitary matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} requires n <= {cap}, got {n}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("sum of |coefficients| is {0}, must not exceed 1")]
    CoefficientNorm(f64),

    #[error("mixed operation needs at least one term")]
    EmptyMixture,

    #[error("sample list is empty")]
    EmptySamples,

    #[error("{0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
