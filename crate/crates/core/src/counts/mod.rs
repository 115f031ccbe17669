//! Synthetic coincidence counts, their conditional-probability estimators,
//! and the pulse-sorting electronics that tag each count with a QRNG bit.

mod estimate;
mod qrng;
mod record;
mod simulate;
mod timeline;

pub use estimate::{
    estimate_branch, estimate_classical, estimate_probabilities, estimate_quantum, ratio_estimate,
    Estimate, ProbabilityEstimates,
};
pub use qrng::{point_seed, qrng_stream, BitStream, QRNG_PERIOD_NS};
pub use record::{BinKey, BinTable, CountRecord};
pub use simulate::{simulate_counts, simulate_counts_with, SimulationOptions};
pub use timeline::{
    calibrate_delay, classify_pulses, BitPattern, DelayCalibration, DetectorPulse, SwitchSynth,
    SwitchTimeline, Tallies, ELECTRONICS_LAG_NS, TRANSITION_WINDOW_NS,
};

#[cfg(test)]
mod tests;
