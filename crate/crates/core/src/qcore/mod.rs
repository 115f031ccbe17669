//! Dense complex linear algebra over up to four polarization qubits.
//!
//! States carry an ordered list of [`QubitLabel`]s; amplitudes are indexed
//! big-endian in that order with |H⟩ ↦ 0 and |V⟩ ↦ 1. States are compared
//! by overlap or density matrix only, never by raw amplitudes, because the
//! physically meaningful states carry arbitrary global phases.

mod gate;
mod label;
mod matrix;
mod ops;
mod state;

pub use gate::{Gate, UNITARITY_TOL};
pub use label::QubitLabel;
pub use matrix::{CMatrix, C64};
pub use ops::{apply_gate, mix, partial_trace, project, tensor, DEGENERATE_PROJECTION};
pub use state::{DensityMatrix, Polarization, PureState, QuantumState, EIGEN_TOL, STATE_TOL};

#[cfg(test)]
mod tests;
