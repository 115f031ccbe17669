use alloc::vec;
use alloc::vec::Vec;

use super::gate::Gate;
use super::label::{ensure_distinct, position, shift};
use super::matrix::{CMatrix, C64, ZERO};
use super::state::{DensityMatrix, PureState, QuantumState, STATE_TOL};
use super::QubitLabel;
use crate::{Error, Result};

/// Born probability below which a projection cannot be renormalized.
pub const DEGENERATE_PROJECTION: f64 = 1e-14;

fn concat_labels(a: &[QubitLabel], b: &[QubitLabel]) -> Result<Vec<QubitLabel>> {
    if let Some(&l) = a.iter().find(|l| b.contains(l)) {
        return Err(Error::LabelCollision(l));
    }
    let mut labels = a.to_vec();
    labels.extend_from_slice(b);
    Ok(labels)
}

impl PureState {
    /// `self ⊗ other` over the concatenated labels.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let labels = concat_labels(self.labels(), other.labels())?;
        let amps = self
            .amplitudes()
            .iter()
            .flat_map(|a| other.amplitudes().iter().map(move |b| a * b))
            .collect();
        Ok(PureState::from_raw(labels, amps))
    }

    /// `U|ψ⟩` with `gate` acting on `targets`.
    pub fn apply(&self, gate: &Gate, targets: &[QubitLabel]) -> Result<PureState> {
        let op = embed(gate, targets, self.labels())?;
        Ok(PureState::from_raw(
            self.labels().to_vec(),
            op.mul_vec(self.amplitudes()),
        ))
    }

    /// Projects `target` onto `direction`, returning the Born probability and
    /// the renormalized state of the remaining qubits.
    pub fn project(&self, target: QubitLabel, direction: &PureState) -> Result<(f64, PureState)> {
        let d = check_direction(direction)?;
        let n = self.num_qubits();
        let pos = position(self.labels(), target)?;
        let rest = remaining(self.labels(), pos);
        let amps = self.amplitudes();
        let mut out = vec![ZERO; 1 << (n - 1)];
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = (0..2)
                .map(|b| d[b].conj() * amps[insert_bit(r, n, pos, b)])
                .sum();
        }
        let prob: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        if prob < DEGENERATE_PROJECTION {
            return Err(Error::DegenerateProjection(prob));
        }
        let inv = 1.0 / libm::sqrt(prob);
        let out = out.into_iter().map(|z| z * inv).collect();
        Ok((prob, PureState::from_raw(rest, out)))
    }
}

impl DensityMatrix {
    /// `self ⊗ other` over the concatenated labels.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let labels = concat_labels(self.labels(), other.labels())?;
        Ok(DensityMatrix::from_raw(
            labels,
            self.matrix().kron(other.matrix()),
        ))
    }

    /// `UρU†` with `gate` acting on `targets`.
    pub fn apply(&self, gate: &Gate, targets: &[QubitLabel]) -> Result<DensityMatrix> {
        let op = embed(gate, targets, self.labels())?;
        Ok(DensityMatrix::from_raw(
            self.labels().to_vec(),
            self.matrix().conjugate_by(&op),
        ))
    }

    /// Reduced state over `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "partial trace needs at least one label to keep".into(),
            ));
        }
        ensure_distinct(keep)?;
        let n = self.num_qubits();
        let keep_pos: Vec<usize> = keep
            .iter()
            .map(|&l| position(self.labels(), l))
            .collect::<Result<_>>()?;
        let traced_pos: Vec<usize> = (0..n).filter(|p| !keep_pos.contains(p)).collect();
        let k = keep_pos.len();
        let compose = |kept: usize, traced: usize| -> usize {
            let mut idx = 0;
            for (i, &p) in keep_pos.iter().enumerate() {
                idx |= ((kept >> shift(k, i)) & 1) << shift(n, p);
            }
            for (i, &p) in traced_pos.iter().enumerate() {
                idx |= ((traced >> shift(traced_pos.len(), i)) & 1) << shift(n, p);
            }
            idx
        };
        let dim = 1usize << k;
        let mut out = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] = (0..1usize << traced_pos.len())
                    .map(|t| self.matrix()[(compose(i, t), compose(j, t))])
                    .sum();
            }
        }
        Ok(DensityMatrix::from_raw(keep.to_vec(), out))
    }

    /// Projects `target` onto `direction`; returns the probability and the
    /// renormalized reduced state of the other qubits.
    pub fn project(
        &self,
        target: QubitLabel,
        direction: &PureState,
    ) -> Result<(f64, DensityMatrix)> {
        let d = check_direction(direction)?;
        let n = self.num_qubits();
        let pos = position(self.labels(), target)?;
        let rest = remaining(self.labels(), pos);
        let dim = 1usize << (n - 1);
        let mut out = CMatrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = ZERO;
                for b in 0..2 {
                    for bb in 0..2 {
                        acc += d[b].conj()
                            * self.matrix()[(insert_bit(r, n, pos, b), insert_bit(c, n, pos, bb))]
                            * d[bb];
                    }
                }
                out[(r, c)] = acc;
            }
        }
        let prob = out.trace().re;
        if prob < DEGENERATE_PROJECTION {
            return Err(Error::DegenerateProjection(prob));
        }
        Ok((prob, DensityMatrix::from_raw(rest, out.scale(1.0 / prob))))
    }
}

/// Tensor product; mixed if either operand is mixed.
pub fn tensor(a: &QuantumState, b: &QuantumState) -> Result<QuantumState> {
    match (a, b) {
        (QuantumState::Pure(x), QuantumState::Pure(y)) => x.tensor(y).map(Into::into),
        _ => a.to_density().tensor(&b.to_density()).map(Into::into),
    }
}

pub fn apply_gate(
    state: &QuantumState,
    gate: &Gate,
    targets: &[QubitLabel],
) -> Result<QuantumState> {
    match state {
        QuantumState::Pure(p) => p.apply(gate, targets).map(Into::into),
        QuantumState::Mixed(m) => m.apply(gate, targets).map(Into::into),
    }
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[QubitLabel]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

pub fn project(
    state: &QuantumState,
    target: QubitLabel,
    direction: &PureState,
) -> Result<(f64, QuantumState)> {
    match state {
        QuantumState::Pure(p) => p.project(target, direction).map(|(q, s)| (q, s.into())),
        QuantumState::Mixed(m) => m.project(target, direction).map(|(q, s)| (q, s.into())),
    }
}

/// `weight·a + (1 − weight)·b`. `b` may list the same labels in another order.
pub fn mix(a: &DensityMatrix, b: &DensityMatrix, weight: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidArgument(alloc::format!(
            "mixing weight {weight} outside [0, 1]"
        )));
    }
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::DimensionMismatch {
            left: a.matrix().dim(),
            right: b.matrix().dim(),
        });
    }
    let b = b.reorder(a.labels())?;
    Ok(DensityMatrix::from_raw(
        a.labels().to_vec(),
        a.matrix().lerp(b.matrix(), weight),
    ))
}

/// Full-register operator: `gate` on `targets`, identity elsewhere.
pub(crate) fn embed(gate: &Gate, targets: &[QubitLabel], labels: &[QubitLabel]) -> Result<CMatrix> {
    if targets.len() != gate.arity() {
        return Err(Error::ArityMismatch {
            expected: gate.arity(),
            got: targets.len(),
        });
    }
    ensure_distinct(targets)?;
    let n = labels.len();
    let pos: Vec<usize> = targets
        .iter()
        .map(|&t| position(labels, t))
        .collect::<Result<_>>()?;
    let k = pos.len();
    let target_mask = pos.iter().fold(0usize, |m, &p| m | (1 << shift(n, p)));
    let gate_index = |i: usize| -> usize {
        pos.iter().enumerate().fold(0, |g, (j, &p)| {
            g | (((i >> shift(n, p)) & 1) << shift(k, j))
        })
    };
    let dim = 1usize << n;
    let u = gate.matrix();
    let mut out = CMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            if i & !target_mask == j & !target_mask {
                out[(i, j)] = u[(gate_index(i), gate_index(j))];
            }
        }
    }
    Ok(out)
}

fn check_direction(direction: &PureState) -> Result<[C64; 2]> {
    if direction.num_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            left: direction.amplitudes().len(),
            right: 2,
        });
    }
    let n2 = direction.norm_sqr();
    if (n2 - 1.0).abs() > STATE_TOL {
        return Err(Error::NotNormalized(n2));
    }
    let a = direction.amplitudes();
    Ok([a[0], a[1]])
}

fn remaining(labels: &[QubitLabel], pos: usize) -> Vec<QubitLabel> {
    labels
        .iter()
        .enumerate()
        .filter(|&(p, _)| p != pos)
        .map(|(_, &l)| l)
        .collect()
}

/// Index in the full `n`-qubit register for reduced index `r` (over the
/// other `n − 1` qubits) with bit `b` inserted at position `pos`.
fn insert_bit(r: usize, n: usize, pos: usize, b: usize) -> usize {
    let low_bits = shift(n, pos);
    let low = r & ((1 << low_bits) - 1);
    let high = r >> low_bits;
    (high << (low_bits + 1)) | (b << low_bits) | low
}
