use std::io;

use thiserror::Error;

/// Errors raised by the simulator and the algorithms built on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("basis index {index} out of range for a {num_qubits}-qubit register")]
    BasisIndexOutOfRange { index: usize, num_qubits: usize },

    #[error("controlled-not needs distinct qubits, got {0} twice")]
    RepeatedQubit(usize),

    #[error("state norm {norm} deviates from 1 by more than {tolerance}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("qubit count mismatch: state has {state}, circuit has {circuit}")]
    QubitCountMismatch { state: usize, circuit: usize },

    #[error("{num_qubits} qubits exceeds the simulator budget of {max}")]
    TooManyQubits { num_qubits: usize, max: usize },

    #[error("value {value} outside the range [{lo}, {hi}]")]
    ValueOutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// Configuration errors map to exit code 2 in the command line tool.
    pub fn is_configuration(&self) -> bool {
        matches!(self, Error::Config(_) | Error::TooManyQubits { .. } | Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
