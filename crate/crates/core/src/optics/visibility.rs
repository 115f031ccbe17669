use core::f64::consts::{FRAC_PI_4, TAU};

use crate::qcore::Polarization;

use super::{
    run_pipeline, AncillaOutcome, Diagonal, ExperimentSetting, NoiseModel, Outcome, QrngBit,
};

/// φ samples used by [`unconditional_visibility`]. Even, so the grid
/// k·2π/n contains both 0 and π.
pub const VISIBILITY_GRID_POINTS: usize = 360;

/// P(S = H | T = H) with C and A traced out, both QRNG branches weighted
/// equally.
pub fn unconditional_p_h(phi: f64, alpha: f64, delta: f64, noise: &NoiseModel) -> f64 {
    let mut total = 0.0;
    for bit in QrngBit::BOTH {
        let table = run_pipeline(
            &ExperimentSetting::new(phi, alpha, delta).with_bit(bit),
            noise,
        );
        let h: f64 = [Diagonal::Plus, Diagonal::Minus]
            .iter()
            .flat_map(|&c| {
                [AncillaOutcome::Alpha, AncillaOutcome::AlphaPerp]
                    .map(|a| Outcome::new(Polarization::H, c, a))
            })
            .map(|o| table.get(o))
            .sum();
        total += 0.5 * h / table.trigger_probability();
    }
    total
}

/// Interference visibility of S without post-selection on C and A,
/// (P_max − P_min)/(P_max + P_min) over φ ∈ [0, 2π).
pub fn unconditional_visibility(noise: &NoiseModel) -> f64 {
    unconditional_visibility_at(noise, FRAC_PI_4, 0.0, VISIBILITY_GRID_POINTS)
}

pub fn unconditional_visibility_at(
    noise: &NoiseModel,
    alpha: f64,
    delta: f64,
    points: usize,
) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..points.max(2) {
        let phi = TAU * k as f64 / points.max(2) as f64;
        let p = unconditional_p_h(phi, alpha, delta, noise);
        lo = lo.min(p);
        hi = hi.max(p);
    }
    (hi - lo) / (hi + lo)
}
