use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::optics::QrngBit;
use crate::{Error, Result};

/// The QRNG produces one bit every 200 ns (5 MHz).
pub const QRNG_PERIOD_NS: f64 = 200.0;

/// Deterministic stand-in for the QRNG output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitStream {
    seed: u64,
    bits: Vec<QrngBit>,
}

impl BitStream {
    pub fn from_bits(seed: u64, bits: Vec<QrngBit>) -> Self {
        Self { seed, bits }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn bits(&self) -> &[QrngBit] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn period_ns(&self) -> f64 {
        QRNG_PERIOD_NS
    }

    pub fn ones_fraction(&self) -> f64 {
        let ones = self.bits.iter().filter(|&&b| b == QrngBit::One).count();
        ones as f64 / self.bits.len().max(1) as f64
    }

    /// Times at which the level changes, with bit k occupying
    /// [k·period, (k+1)·period).
    pub fn edges(&self) -> Vec<f64> {
        self.bits
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] != w[1])
            .map(|(k, _)| (k + 1) as f64 * QRNG_PERIOD_NS)
            .collect()
    }
}

/// `n` pseudo-random bits from a ChaCha8 stream keyed by `seed`.
pub fn qrng_stream(seed: u64, n: usize) -> Result<BitStream> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "bit stream length must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = Vec::with_capacity(n);
    while bits.len() < n {
        let word = rng.next_u64();
        for i in 0..64.min(n - bits.len()) {
            bits.push(QrngBit::from_index((word >> i) as usize & 1));
        }
    }
    Ok(BitStream { seed, bits })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one grid point, mixed from the run seed and the point's
/// coordinates so results do not depend on evaluation order.
pub fn point_seed(seed: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(splitmix64(seed), |acc, &c| {
        splitmix64(acc ^ splitmix64(c.wrapping_add(1)))
    })
}
