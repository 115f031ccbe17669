use alloc::string::String;
use alloc::vec::Vec;

use crate::qcore::QubitLabel;

/// Errors produced by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit label {0} appears in both operands")]
    LabelCollision(QubitLabel),

    #[error("qubit label {0} is not part of the state")]
    UnknownLabel(QubitLabel),

    #[error("qubit label {0} is listed more than once")]
    DuplicateLabel(QubitLabel),

    #[error("gate of arity {expected} applied to {got} target(s)")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("density matrix has an eigenvalue below -1e-10")]
    NotPositive,

    #[error("gate `{name}` is not unitary (max deviation {deviation:e})")]
    NonUnitary { name: String, deviation: f64 },

    #[error("projection probability {0:e} is too small to renormalize")]
    DegenerateProjection(f64),

    #[error("post-selection probability {0:e} vanishes; conditional probability undefined")]
    DegenerateConditioning(f64),

    #[error("insufficient counts: bins {} are all empty", .0.join(", "))]
    InsufficientCounts(Vec<String>),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("group index {0} is below 1; medium is unphysical")]
    UnphysicalMedium(f64),

    #[error("unknown event label `{0}`")]
    UnknownEvent(String),

    #[error("event label `{0}` is not unique in the ledger")]
    DuplicateEvent(String),

    #[error("alpha = {0} rad lies outside [0, pi/2]")]
    AlphaOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
