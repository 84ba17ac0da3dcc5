use thiserror::Error;

/// Errors produced by the simulator and harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("circuit parse error at line {line}: {message}")]
    CircuitParse { line: usize, message: String },

    #[error("unknown builtin circuit `{0}`")]
    UnknownCircuit(String),

    #[error("normalizing series has zero variance; NMSE is undefined")]
    DegenerateNormalization,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("ODE step size underflow on interval [{interval_start}, {interval_end}]")]
    StepSizeUnderflow {
        interval_start: f64,
        interval_end: f64,
    },

    #[error("arithmetic overflow in cost estimate")]
    CostOverflow,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
