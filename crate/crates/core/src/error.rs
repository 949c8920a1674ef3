use thiserror::Error;

/// Errors produced by the simulator and the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("wire {wire} out of range for a {n_qubits}-qubit register")]
    WireOutOfRange { wire: usize, n_qubits: usize },

    #[error("duplicate wire {0}")]
    DuplicateWire(usize),

    #[error("gate {gate} expects {expected} wire(s), got {got}")]
    WireCount {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("gate {gate} expects {expected} angle(s), got {got}")]
    AngleCount {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("angle is not finite: {0}")]
    NonFiniteAngle(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation requires a pure state")]
    NotPure,

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("unknown ansatz `{0}`")]
    UnknownAnsatz(String),

    #[error("ansatz {ansatz} needs at least {min} qubit(s), got {got}")]
    TooFewQubits {
        ansatz: &'static str,
        min: usize,
        got: usize,
    },

    #[error("parameter vector has length {got}, circuit expects {expected}")]
    ParameterLength { expected: usize, got: usize },

    #[error("invalid noise parameters: {0}")]
    InvalidNoise(String),

    #[error("{0} requires a noiseless model")]
    NoiseNotSupported(&'static str),

    #[error("gate {0} is not supported here")]
    UnsupportedGate(&'static str),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Haar bin {0} has zero probability mass")]
    ZeroReferenceMass(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
