use core::fmt;

use crate::{Error, Result};

/// One of the four photons. The declaration order is the global tensor
/// order (S, C, A, T).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QubitLabel {
    /// System photon sent through the interferometer.
    S,
    /// Control photon driving the controlled-Hadamard.
    C,
    /// Ancilla photon measured in the remote lab.
    A,
    /// Trigger photon heralding S.
    T,
}

impl QubitLabel {
    pub const ALL: [QubitLabel; 4] = [Self::S, Self::C, Self::A, Self::T];

    /// Position in the canonical (S, C, A, T) ordering.
    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::S => "S",
            Self::C => "C",
            Self::A => "A",
            Self::T => "T",
        }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn ensure_distinct(labels: &[QubitLabel]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    Ok(())
}

pub(crate) fn position(labels: &[QubitLabel], label: QubitLabel) -> Result<usize> {
    labels
        .iter()
        .position(|&l| l == label)
        .ok_or(Error::UnknownLabel(label))
}

/// Bit shift of the qubit at `pos` in an `n`-qubit big-endian index.
pub(crate) fn shift(n: usize, pos: usize) -> usize {
    n - 1 - pos
}
