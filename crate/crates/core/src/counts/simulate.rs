use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::optics::{run_pipeline, ExperimentSetting, NoiseModel, QrngBit};
use crate::{Error, Result};

use super::CountRecord;

/// Knobs for [`simulate_counts_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationOptions {
    /// Probability that a triggered event is recorded at all.
    pub detection_probability: f64,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            detection_probability: 1.0,
        }
    }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Samples `trials` triggered events at one setting without losses.
pub fn simulate_counts(
    setting: &ExperimentSetting,
    noise: &NoiseModel,
    trials: u64,
    seed: u64,
) -> Result<CountRecord> {
    simulate_counts_with(setting, noise, trials, seed, &SimulationOptions::default())
}

/// Samples `trials` triggered events. Each event draws a QRNG bit, then one
/// of the eight outcomes from that branch's trigger-conditioned table.
pub fn simulate_counts_with(
    setting: &ExperimentSetting,
    noise: &NoiseModel,
    trials: u64,
    seed: u64,
    options: &SimulationOptions,
) -> Result<CountRecord> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let keep = options.detection_probability;
    if !(0.0..=1.0).contains(&keep) {
        return Err(Error::InvalidArgument(alloc::format!(
            "detection probability {keep} outside [0, 1]"
        )));
    }

    let cumulative = QrngBit::BOTH.map(|bit| {
        let table = run_pipeline(&setting.with_bit(bit), noise).conditional_table();
        let mut acc = 0.0;
        table.map(|p| {
            acc += p;
            acc
        })
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 16];
    for _ in 0..trials {
        let bit = QrngBit::from_index((rng.next_u32() & 1) as usize);
        let u = unit(&mut rng);
        let cum = &cumulative[bit.index()];
        let outcome = cum.iter().position(|&c| u < c).unwrap_or(7);
        if keep < 1.0 && unit(&mut rng) >= keep {
            continue;
        }
        // Bin layout matches BinKey::index.
        counts[bit.index() * 8 + outcome] += 1;
    }
    CountRecord::new(*setting, counts, trials)
}
