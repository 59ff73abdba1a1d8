use thiserror::Error;

/// Errors raised by state, channel and certification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation (bad index,
    /// mismatched dimension, non-unitary matrix, invalid probability).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested qubit count exceeds the configured maximum.
    #[error("capacity exceeded: {n_qubits} qubits requested, maximum is {max}")]
    Capacity { n_qubits: usize, max: usize },

    /// An internal numerical identity failed. This points at a bug, not at bad input.
    #[error("numerical consistency failure: {0}")]
    Consistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code for this failure class: 2 for internal consistency
    /// failures, 1 for everything caused by input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Consistency(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
