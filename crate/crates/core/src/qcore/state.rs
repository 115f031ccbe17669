use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

use super::label::{ensure_distinct, position, shift};
use super::matrix::{CMatrix, C64, ONE, ZERO};
use super::QubitLabel;
use crate::{Error, Result};

/// Tolerance for normalization, Hermiticity and unit trace.
pub const STATE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density matrix.
pub const EIGEN_TOL: f64 = 1e-10;

/// Polarization basis states: |H⟩ = (1, 0)ᵀ, |V⟩ = (0, 1)ᵀ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Normalized state vector over an ordered list of qubits.
///
/// Amplitudes are indexed big-endian in label order, |H⟩ ↦ 0 and |V⟩ ↦ 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    labels: Vec<QubitLabel>,
    amplitudes: Vec<C64>,
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn check_dim(labels: &[QubitLabel], len: usize) -> Result<()> {
    ensure_distinct(labels)?;
    let expected = 1usize << labels.len();
    if len != expected {
        return Err(Error::DimensionMismatch {
            left: len,
            right: expected,
        });
    }
    Ok(())
}

impl PureState {
    /// Validates length and normalization (within [`STATE_TOL`]).
    pub fn new(labels: Vec<QubitLabel>, amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(&labels, amplitudes.len())?;
        let n2 = norm_sqr(&amplitudes);
        if (n2 - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { labels, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(labels: Vec<QubitLabel>, amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(&labels, amplitudes.len())?;
        let n2 = norm_sqr(&amplitudes);
        if n2 < 1e-300 {
            return Err(Error::NotNormalized(n2));
        }
        let inv = 1.0 / sqrt(n2);
        Ok(Self {
            labels,
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
        })
    }

    pub(crate) fn from_raw(labels: Vec<QubitLabel>, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << labels.len());
        Self { labels, amplitudes }
    }

    /// Single-qubit state `h|H⟩ + v|V⟩`, normalized.
    pub fn qubit(label: QubitLabel, h: C64, v: C64) -> Result<Self> {
        Self::normalized(vec![label], vec![h, v])
    }

    pub fn basis(label: QubitLabel, pol: Polarization) -> Self {
        let mut amps = vec![ZERO; 2];
        amps[pol.index()] = ONE;
        Self::from_raw(vec![label], amps)
    }

    /// Product of basis states, e.g. `|V H⟩` over `[S, T]`.
    pub fn product(labels: &[QubitLabel], pols: &[Polarization]) -> Result<Self> {
        if labels.len() != pols.len() {
            return Err(Error::DimensionMismatch {
                left: labels.len(),
                right: pols.len(),
            });
        }
        ensure_distinct(labels)?;
        let n = labels.len();
        let idx = pols
            .iter()
            .enumerate()
            .fold(0usize, |acc, (p, pol)| acc | (pol.index() << shift(n, p)));
        let mut amps = vec![ZERO; 1 << n];
        amps[idx] = ONE;
        Ok(Self::from_raw(labels.to_vec(), amps))
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Same amplitudes under a different label (single-qubit states only).
    pub fn relabel(&self, label: QubitLabel) -> Result<Self> {
        if self.labels.len() != 1 {
            return Err(Error::DimensionMismatch {
                left: self.labels.len(),
                right: 1,
            });
        }
        Ok(Self::from_raw(vec![label], self.amplitudes.clone()))
    }

    /// ⟨self|other⟩, with `other` permuted to this state's label order.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        let other = other.reorder(&self.labels)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|², the global-phase-free comparison.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Same state with tensor factors permuted into `order`.
    pub fn reorder(&self, order: &[QubitLabel]) -> Result<Self> {
        let perm = permutation(&self.labels, order)?;
        let n = self.labels.len();
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (i, amp) in self.amplitudes.iter().enumerate() {
            out[permute_index(i, n, &perm)] = *amp;
        }
        Ok(Self::from_raw(order.to_vec(), out))
    }

    /// Reordered into the global (S, C, A, T) order.
    pub fn canonical(&self) -> Self {
        let mut order = self.labels.clone();
        order.sort();
        self.reorder(&order)
            .expect("sorted labels are a permutation")
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_raw(self.labels.clone(), CMatrix::outer(&self.amplitudes))
    }
}

/// Density operator over an ordered list of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<QubitLabel>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(labels: Vec<QubitLabel>, matrix: CMatrix) -> Result<Self> {
        check_dim(&labels, matrix.dim())?;
        let rho = Self { labels, matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_raw(labels: Vec<QubitLabel>, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << labels.len());
        Self { labels, matrix }
    }

    /// I / 2ⁿ
    pub fn maximally_mixed(labels: Vec<QubitLabel>) -> Result<Self> {
        ensure_distinct(&labels)?;
        let dim = 1usize << labels.len();
        let m = CMatrix::identity(dim).scale(1.0 / dim as f64);
        Ok(Self::from_raw(labels, m))
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.matrix.hermiticity_defect();
        if herm > STATE_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = self.matrix.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::BadTrace(tr));
        }
        if !self.matrix.is_positive_semidefinite(EIGEN_TOL) {
            return Err(Error::NotPositive);
        }
        Ok(())
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Matrix element ⟨row|ρ|col⟩ for basis indices in this state's order.
    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// ⟨v|ρ|v⟩ for a pure state over the same labels (any order).
    pub fn expectation(&self, ket: &PureState) -> Result<f64> {
        let ket = ket.reorder(&self.labels)?;
        let rv = self.matrix.mul_vec(ket.amplitudes());
        Ok(ket
            .amplitudes()
            .iter()
            .zip(&rv)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re)
    }

    pub fn reorder(&self, order: &[QubitLabel]) -> Result<Self> {
        let perm = permutation(&self.labels, order)?;
        let n = self.labels.len();
        let dim = self.matrix.dim();
        let mut out = CMatrix::zeros(dim);
        for i in 0..dim {
            let pi = permute_index(i, n, &perm);
            for j in 0..dim {
                out[(pi, permute_index(j, n, &perm))] = self.matrix[(i, j)];
            }
        }
        Ok(Self::from_raw(order.to_vec(), out))
    }

    pub fn canonical(&self) -> Self {
        let mut order = self.labels.clone();
        order.sort();
        self.reorder(&order)
            .expect("sorted labels are a permutation")
    }

    /// Largest entrywise deviation, after aligning label orders.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        let other = other.reorder(&self.labels)?;
        Ok(self.matrix.max_abs_diff(&other.matrix))
    }
}

/// Either representation; operations promote to a density matrix when the
/// operands are mixed.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn labels(&self) -> &[QubitLabel] {
        match self {
            Self::Pure(p) => p.labels(),
            Self::Mixed(m) => m.labels(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            Self::Pure(p) => p.to_density(),
            Self::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            Self::Pure(p) => Some(p),
            Self::Mixed(_) => None,
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(p: PureState) -> Self {
        Self::Pure(p)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(m: DensityMatrix) -> Self {
        Self::Mixed(m)
    }
}

/// `perm[p]` = position in `to` of the label at position `p` in `from`.
fn permutation(from: &[QubitLabel], to: &[QubitLabel]) -> Result<Vec<usize>> {
    ensure_distinct(to)?;
    if from.len() != to.len() {
        return Err(Error::DimensionMismatch {
            left: from.len(),
            right: to.len(),
        });
    }
    from.iter().map(|&l| position(to, l)).collect()
}

fn permute_index(i: usize, n: usize, perm: &[usize]) -> usize {
    perm.iter().enumerate().fold(0, |acc, (p, &q)| {
        acc | (((i >> shift(n, p)) & 1) << shift(n, q))
    })
}
