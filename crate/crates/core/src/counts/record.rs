use alloc::string::String;
use core::fmt;

use crate::optics::{AncillaOutcome, Diagonal, ExperimentSetting, NoiseModel, Outcome, QrngBit};
use crate::qcore::Polarization;
use crate::{Error, Result};

/// One of the 16 count bins: a joint outcome and the QRNG bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinKey {
    pub outcome: Outcome,
    pub bit: QrngBit,
}

impl BinKey {
    pub const COUNT: usize = 16;

    pub fn new(outcome: Outcome, bit: QrngBit) -> Self {
        Self { outcome, bit }
    }

    pub fn index(self) -> usize {
        self.bit.index() * 8 + self.outcome.index()
    }

    pub fn from_index(i: usize) -> Self {
        Self::new(Outcome::ALL[i % 8], QrngBit::from_index(i / 8))
    }

    pub fn all() -> impl Iterator<Item = BinKey> {
        (0..Self::COUNT).map(Self::from_index)
    }

    /// File codes: H/V, P/M, A/AP, 0/1.
    pub fn codes(self) -> [&'static str; 4] {
        let o = self.outcome;
        [
            match o.s {
                Polarization::H => "H",
                Polarization::V => "V",
            },
            match o.c {
                Diagonal::Plus => "P",
                Diagonal::Minus => "M",
            },
            match o.a {
                AncillaOutcome::Alpha => "A",
                AncillaOutcome::AlphaPerp => "AP",
            },
            match self.bit {
                QrngBit::Zero => "0",
                QrngBit::One => "1",
            },
        ]
    }

    pub fn from_codes(s: &str, c: &str, a: &str, bit: &str) -> Option<Self> {
        let s = match s {
            "H" => Polarization::H,
            "V" => Polarization::V,
            _ => return None,
        };
        let c = match c {
            "P" => Diagonal::Plus,
            "M" => Diagonal::Minus,
            _ => return None,
        };
        let a = match a {
            "A" => AncillaOutcome::Alpha,
            "AP" => AncillaOutcome::AlphaPerp,
            _ => return None,
        };
        let bit = match bit {
            "0" => QrngBit::Zero,
            "1" => QrngBit::One,
            _ => return None,
        };
        Some(Self::new(Outcome::new(s, c, a), bit))
    }
}

impl fmt::Display for BinKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [s, c, a, b] = self.codes();
        write!(f, "{s}{c}{a}/bit{b}")
    }
}

/// Integer four-fold coincidence counts for one setting. The stored
/// setting always carries bit 0; the bit lives in the bin keys.
#[derive(Clone, Debug, PartialEq)]
pub struct CountRecord {
    setting: ExperimentSetting,
    counts: [u64; 16],
    total_trials: u64,
}

impl CountRecord {
    pub fn new(setting: ExperimentSetting, counts: [u64; 16], total_trials: u64) -> Result<Self> {
        let sum: u64 = counts.iter().sum();
        if sum > total_trials {
            return Err(Error::InvalidArgument(alloc::format!(
                "{sum} counts exceed {total_trials} trials"
            )));
        }
        Ok(Self {
            setting: ExperimentSetting {
                qrng_bit: QrngBit::Zero,
                ..setting
            },
            counts,
            total_trials,
        })
    }

    pub fn empty(setting: ExperimentSetting) -> Self {
        Self::new(setting, [0; 16], 0).expect("zero counts")
    }

    pub fn setting(&self) -> &ExperimentSetting {
        &self.setting
    }

    pub fn counts(&self) -> &[u64; 16] {
        &self.counts
    }

    pub fn get(&self, key: BinKey) -> u64 {
        self.counts[key.index()]
    }

    pub fn total_trials(&self) -> u64 {
        self.total_trials
    }

    pub fn total_counts(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Adds the bins and trials of another record at the same setting.
    pub fn merge(&self, other: &CountRecord) -> Result<CountRecord> {
        if self.setting != other.setting {
            return Err(Error::InvalidArgument(
                "cannot merge records at different settings".into(),
            ));
        }
        let mut counts = self.counts;
        for (c, o) in counts.iter_mut().zip(other.counts) {
            *c += o;
        }
        Ok(Self {
            setting: self.setting,
            counts,
            total_trials: self.total_trials + other.total_trials,
        })
    }

    pub fn to_bins(&self) -> BinTable {
        BinTable {
            setting: self.setting,
            bins: self.counts.map(|c| c as f64),
        }
    }
}

/// Real-valued bin contents, used for expected counts and as fitter input.
#[derive(Clone, Debug, PartialEq)]
pub struct BinTable {
    pub setting: ExperimentSetting,
    pub bins: [f64; 16],
}

impl BinTable {
    /// Expected bins after `trials` triggered events: each bit is drawn
    /// with probability ½ and the outcome from the trigger-conditioned table.
    pub fn expected(setting: &ExperimentSetting, noise: &NoiseModel, trials: f64) -> Self {
        let mut bins = [0.0; 16];
        for bit in QrngBit::BOTH {
            let table = crate::optics::run_pipeline(&setting.with_bit(bit), noise);
            for o in Outcome::ALL {
                bins[BinKey::new(o, bit).index()] = trials * table.conditional(o) / 2.0;
            }
        }
        Self {
            setting: ExperimentSetting {
                qrng_bit: QrngBit::Zero,
                ..*setting
            },
            bins,
        }
    }

    pub fn get(&self, key: BinKey) -> f64 {
        self.bins[key.index()]
    }

    pub fn total(&self) -> f64 {
        self.bins.iter().sum()
    }

    /// Bins of one QRNG branch in outcome order.
    pub fn branch(&self, bit: QrngBit) -> [f64; 8] {
        core::array::from_fn(|i| self.bins[bit.index() * 8 + i])
    }
}

/// Names of the given bins joined for error messages.
pub(crate) fn bin_names(keys: &[BinKey]) -> alloc::vec::Vec<String> {
    keys.iter().map(|k| alloc::format!("{k}")).collect()
}
