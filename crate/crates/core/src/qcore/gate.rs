use alloc::string::String;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};

use libm::{cos, sin};

use super::matrix::{CMatrix, C64};
use crate::{Error, Result};

/// Entrywise tolerance on `U·U† − I`.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A one- or two-qubit unitary.
///
/// For two-qubit gates the first target passed to `apply_gate` is the
/// high-order index of the matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    name: String,
    arity: usize,
    matrix: CMatrix,
}

/// `[[cos θ, sin θ], [sin θ, −cos θ]]`, the half-wave-plate form shared by
/// the H, W and α gates.
fn reflection(theta: f64) -> CMatrix {
    let (c, s) = (cos(theta), sin(theta));
    CMatrix::from_real(2, &[c, s, s, -c])
}

impl Gate {
    /// Wraps `matrix` as a gate, checking it is 2×2 or 4×4 and unitary.
    pub fn new(name: impl Into<String>, matrix: CMatrix) -> Result<Self> {
        let name = name.into();
        let arity = match matrix.dim() {
            2 => 1,
            4 => 2,
            d => {
                return Err(Error::InvalidArgument(alloc::format!(
                    "gate `{name}` has dimension {d}; only 2 and 4 are supported"
                )))
            }
        };
        let deviation = matrix.unitarity_defect();
        if deviation > UNITARITY_TOL {
            return Err(Error::NonUnitary { name, deviation });
        }
        Ok(Self {
            name,
            arity,
            matrix,
        })
    }

    fn trusted(name: &str, matrix: CMatrix) -> Self {
        Self::new(name, matrix).expect("built-in gate is unitary")
    }

    pub fn identity() -> Self {
        Self::trusted("I", CMatrix::identity(2))
    }

    /// Hadamard as realised by a half-wave plate at 22.5°.
    pub fn hadamard() -> Self {
        Self::trusted("H", reflection(FRAC_PI_4))
    }

    /// Half-wave plate at 11.25°; sandwiches CZ to make the CH gate.
    pub fn w() -> Self {
        Self::trusted("W", reflection(FRAC_PI_8))
    }

    /// Relative phase `φ` on |V⟩ (the Soleil–Babinet compensator).
    pub fn phase(phi: f64) -> Self {
        Self::trusted(
            "Phi",
            CMatrix::diagonal(&[C64::new(1.0, 0.0), C64::from_polar(1.0, phi)]),
        )
    }

    /// Rotation applied to photon A before H/V detection. It maps |α⊥⟩
    /// onto |V⟩ and |α⟩ onto |H⟩.
    pub fn alpha(alpha: f64) -> Self {
        Self::trusted("Alpha", reflection(alpha))
    }

    /// Controlled-Z: −1 on |VV⟩ only.
    pub fn cz() -> Self {
        let one = C64::new(1.0, 0.0);
        Self::trusted("CZ", CMatrix::diagonal(&[one, one, one, -one]))
    }

    /// Controlled-Hadamard with the control as first (high-order) qubit.
    pub fn ch() -> Self {
        let h = FRAC_1_SQRT_2;
        #[rustfmt::skip]
        let m = CMatrix::from_real(4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, h,   h,
            0.0, 0.0, h,   -h,
        ]);
        Self::trusted("CH", m)
    }

    /// `(I ⊗ W)·CZ·(I ⊗ W)`, the optical construction of [`Gate::ch`].
    pub fn ch_from_cz() -> Self {
        let iw = CMatrix::identity(2).kron(Self::w().matrix());
        let m = iw.matmul(Self::cz().matrix()).matmul(&iw);
        Self::trusted("CH", m)
    }

    /// `self` applied after `first`, i.e. the matrix product `self · first`.
    pub fn after(&self, first: &Gate) -> Result<Self> {
        if self.arity != first.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: first.arity,
            });
        }
        let mut name = self.name.clone();
        name.push('*');
        name.push_str(&first.name);
        Self::new(name, self.matrix.matmul(&first.matrix))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

impl core::fmt::Display for Gate {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.name)
    }
}
