//! Simulation core for the non-local quantum delayed-choice experiment.
//!
//! Everything in this crate is pure computation over immutable values and
//! builds without `std` (only `alloc` is required):
//!
//! - [`qcore`]: dense complex linear algebra over up to four labelled
//!   polarization qubits (S, C, A, T).
//! - [`optics`]: source states, the MZI + controlled-Hadamard pipeline, and
//!   closed-form outcome probabilities with and without Werner/white noise.
//! - [`counts`]: seeded QRNG bit streams, Monte Carlo coincidence counts,
//!   ratio estimators and the switch-timing classifier.
//! - [`spacetime`]: event ledger, channel delays and light-cone checks.
//! - [`fitkit`]: bounded least-squares fitting of the noise model, HOM dips
//!   and dip position against phase.
//!
//! File formats, the command-line front end and parallel sweeps live in the
//! companion `qdc` crate.

#![no_std]
#![forbid(unsafe_code)]
// Range checks are written `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod counts;
mod error;
pub mod fitkit;
pub mod grid;
pub mod optics;
pub mod qcore;
pub mod spacetime;

pub use error::{Error, Result};
