use core::f64::consts::FRAC_PI_2;

use crate::optics::QrngBit;
use crate::{Error, Result};

const RANGE_SLACK: f64 = 1e-12;

/// Projection angle set by a half-wave plate at `theta` ahead of the EOM:
/// α = 4θ − π/2 on bit 0, and 0 on bit 1.
pub fn hwp_to_alpha(theta: f64, bit: QrngBit) -> Result<f64> {
    if bit == QrngBit::One {
        return Ok(0.0);
    }
    let alpha = 4.0 * theta - FRAC_PI_2;
    if !(-RANGE_SLACK..=FRAC_PI_2 + RANGE_SLACK).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(alpha.clamp(0.0, FRAC_PI_2))
}
