use libm::sqrt;

use crate::optics::{AncillaOutcome, Diagonal, Outcome, QrngBit};
use crate::qcore::Polarization;
use crate::{Error, Result};

use super::record::bin_names;
use super::{BinKey, BinTable, CountRecord};

/// A ratio estimate with its one-sigma Poisson error bar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// a/(a+b) with error √(ab/(a+b)³), treating a and b as independent
/// Poisson counts. `None` when both are zero.
pub fn ratio_estimate(a: f64, b: f64) -> Option<Estimate> {
    let n = a + b;
    if n <= 0.0 {
        return None;
    }
    Some(Estimate {
        value: a / n,
        error: sqrt(a * b / (n * n * n)),
    })
}

/// Conditional probabilities of S for one QRNG branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityEstimates {
    pub classical_h: Estimate,
    pub classical_v: Estimate,
    pub quantum_h: Estimate,
    pub quantum_v: Estimate,
}

fn key(s: Polarization, c: Diagonal, bit: QrngBit) -> BinKey {
    BinKey::new(Outcome::new(s, c, AncillaOutcome::AlphaPerp), bit)
}

fn pair(bins: &BinTable, h: &[BinKey], v: &[BinKey]) -> Result<(Estimate, Estimate)> {
    let sum = |keys: &[BinKey]| keys.iter().map(|&k| bins.get(k)).sum::<f64>();
    let (a, b) = (sum(h), sum(v));
    match (ratio_estimate(a, b), ratio_estimate(b, a)) {
        (Some(eh), Some(ev)) => Ok((eh, ev)),
        _ => {
            let mut keys = alloc::vec::Vec::from(h);
            keys.extend_from_slice(v);
            Err(Error::InsufficientCounts(bin_names(&keys)))
        }
    }
}

/// P_C(H), P_C(V) from the A = α⊥ bins, summed over C.
pub fn estimate_classical(bins: &BinTable, bit: QrngBit) -> Result<(Estimate, Estimate)> {
    use Diagonal::{Minus, Plus};
    use Polarization::{H, V};
    pair(
        bins,
        &[key(H, Plus, bit), key(H, Minus, bit)],
        &[key(V, Plus, bit), key(V, Minus, bit)],
    )
}

/// P_Q(H), P_Q(V) from the C = −, A = α⊥ bins.
pub fn estimate_quantum(bins: &BinTable, bit: QrngBit) -> Result<(Estimate, Estimate)> {
    use Polarization::{H, V};
    pair(
        bins,
        &[key(H, Diagonal::Minus, bit)],
        &[key(V, Diagonal::Minus, bit)],
    )
}

/// All four conditionals of one branch.
pub fn estimate_branch(bins: &BinTable, bit: QrngBit) -> Result<ProbabilityEstimates> {
    let (classical_h, classical_v) = estimate_classical(bins, bit)?;
    let (quantum_h, quantum_v) = estimate_quantum(bins, bit)?;
    Ok(ProbabilityEstimates {
        classical_h,
        classical_v,
        quantum_h,
        quantum_v,
    })
}

/// Conditionals for the α branch (bit 0) of a count record.
pub fn estimate_probabilities(rec: &CountRecord) -> Result<ProbabilityEstimates> {
    estimate_branch(&rec.to_bins(), QrngBit::Zero)
}
