use core::fmt;

use crate::qcore::Polarization;
use crate::{Error, Result};

/// Random bit that selects the projection angle for photon A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QrngBit {
    /// Project with the configured angle α.
    Zero,
    /// Project with angle 0 (H/V basis).
    One,
}

impl QrngBit {
    pub const BOTH: [QrngBit; 2] = [Self::Zero, Self::One];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        if i & 1 == 0 {
            Self::Zero
        } else {
            Self::One
        }
    }
}

/// One point of the (φ, α, δ) parameter space plus the QRNG branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentSetting {
    /// MZI phase φ (radians).
    pub phi: f64,
    /// Projection angle α for bit 0 (radians, nominally in [0, π/2]).
    pub alpha: f64,
    /// Phase δ of the C–A entangled pair (radians).
    pub delta: f64,
    pub qrng_bit: QrngBit,
}

impl ExperimentSetting {
    /// Setting on the α branch (bit 0).
    pub fn new(phi: f64, alpha: f64, delta: f64) -> Self {
        Self {
            phi,
            alpha,
            delta,
            qrng_bit: QrngBit::Zero,
        }
    }

    pub fn with_bit(self, qrng_bit: QrngBit) -> Self {
        Self { qrng_bit, ..self }
    }

    /// α when the bit is 0, otherwise 0.
    pub fn effective_alpha(&self) -> f64 {
        match self.qrng_bit {
            QrngBit::Zero => self.alpha,
            QrngBit::One => 0.0,
        }
    }
}

/// Werner fidelities of the S–T and C–A sources (`f1`, `f2`) and the
/// white-noise fidelity of the CZ gate (`f3`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    f1: f64,
    f2: f64,
    f3: f64,
}

impl NoiseModel {
    pub const IDEAL: NoiseModel = NoiseModel {
        f1: 1.0,
        f2: 1.0,
        f3: 1.0,
    };

    /// Fidelities used for the published theory surfaces.
    pub const MEASURED: NoiseModel = NoiseModel {
        f1: 0.98,
        f2: 0.90,
        f3: 0.61,
    };

    pub fn new(f1: f64, f2: f64, f3: f64) -> Result<Self> {
        for (name, f) in [("f1", f1), ("f2", f2), ("f3", f3)] {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "{name} = {f} outside [0, 1]"
                )));
            }
        }
        Ok(Self { f1, f2, f3 })
    }

    pub fn from_array(f: [f64; 3]) -> Result<Self> {
        Self::new(f[0], f[1], f[2])
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn f2(&self) -> f64 {
        self.f2
    }

    pub fn f3(&self) -> f64 {
        self.f3
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.f1, self.f2, self.f3]
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::IDEAL
    }
}

/// Outcome of photon C in the diagonal basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Diagonal {
    /// (|H⟩ + |V⟩)/√2
    Plus,
    /// (|H⟩ − |V⟩)/√2
    Minus,
}

/// Outcome of photon A: |α⟩ (H after rotation) or |α⊥⟩ (V after rotation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AncillaOutcome {
    Alpha,
    AlphaPerp,
}

/// Joint detection outcome of photons S, C and A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    pub s: Polarization,
    pub c: Diagonal,
    pub a: AncillaOutcome,
}

impl Outcome {
    pub const fn new(s: Polarization, c: Diagonal, a: AncillaOutcome) -> Self {
        Self { s, c, a }
    }

    /// All eight outcomes in index order.
    pub const ALL: [Outcome; 8] = {
        use AncillaOutcome::*;
        use Diagonal::*;
        use Polarization::*;
        [
            Outcome::new(H, Plus, Alpha),
            Outcome::new(H, Plus, AlphaPerp),
            Outcome::new(H, Minus, Alpha),
            Outcome::new(H, Minus, AlphaPerp),
            Outcome::new(V, Plus, Alpha),
            Outcome::new(V, Plus, AlphaPerp),
            Outcome::new(V, Minus, Alpha),
            Outcome::new(V, Minus, AlphaPerp),
        ]
    };

    pub fn index(self) -> usize {
        (self.s as usize) << 2 | (self.c as usize) << 1 | self.a as usize
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.s {
            Polarization::H => "H",
            Polarization::V => "V",
        };
        let c = match self.c {
            Diagonal::Plus => "+",
            Diagonal::Minus => "-",
        };
        let a = match self.a {
            AncillaOutcome::Alpha => "a",
            AncillaOutcome::AlphaPerp => "a_perp",
        };
        write!(f, "{s}{c}{a}")
    }
}
