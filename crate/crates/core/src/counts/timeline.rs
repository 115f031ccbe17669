//! Sorting detector pulses by the delayed QRNG level, as the coincidence
//! electronics in Lab 2 do, and finding the delay that sorts them best.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::optics::QrngBit;
use crate::qcore::Polarization;
use crate::{Error, Result};

use super::{qrng_stream, BitStream, QRNG_PERIOD_NS};

/// Lumped lag from a QRNG edge to the EOM having switched, as seen at the
/// detectors.
pub const ELECTRONICS_LAG_NS: f64 = 88.0;
/// Default width of the EOM transition after each edge.
pub const TRANSITION_WINDOW_NS: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorPulse {
    pub time_ns: f64,
    pub channel: Polarization,
}

/// QRNG level changes and detector pulses on a common clock.
///
/// A pulse less than `transition_window_ns` after a (delayed) edge is
/// sorted with the level from before that edge.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchTimeline {
    initial_level: QrngBit,
    bit_edges: Vec<f64>,
    pulses: Vec<DetectorPulse>,
    classifier_delay_ns: f64,
    transition_window_ns: f64,
}

fn strictly_increasing(times: impl Iterator<Item = f64>, what: &str) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for t in times {
        if !t.is_finite() || t <= prev {
            return Err(Error::InvalidArgument(alloc::format!(
                "{what} times must be finite and strictly increasing"
            )));
        }
        prev = t;
    }
    Ok(())
}

impl SwitchTimeline {
    pub fn new(
        initial_level: QrngBit,
        bit_edges: Vec<f64>,
        pulses: Vec<DetectorPulse>,
        classifier_delay_ns: f64,
    ) -> Result<Self> {
        strictly_increasing(bit_edges.iter().copied(), "edge")?;
        strictly_increasing(pulses.iter().map(|p| p.time_ns), "pulse")?;
        Ok(Self {
            initial_level,
            bit_edges,
            pulses,
            classifier_delay_ns,
            transition_window_ns: 0.0,
        })
    }

    pub fn with_transition_window(self, transition_window_ns: f64) -> Result<Self> {
        if !(transition_window_ns >= 0.0) {
            return Err(Error::InvalidArgument(
                "transition window must be non-negative".into(),
            ));
        }
        Ok(Self {
            transition_window_ns,
            ..self
        })
    }

    pub fn initial_level(&self) -> QrngBit {
        self.initial_level
    }

    pub fn bit_edges(&self) -> &[f64] {
        &self.bit_edges
    }

    pub fn pulses(&self) -> &[DetectorPulse] {
        &self.pulses
    }

    pub fn classifier_delay_ns(&self) -> f64 {
        self.classifier_delay_ns
    }

    pub fn transition_window_ns(&self) -> f64 {
        self.transition_window_ns
    }

    /// Tallies at the timeline's own classifier delay.
    pub fn classify(&self) -> Tallies {
        classify_pulses(self, self.classifier_delay_ns)
    }

    /// Level in force at time `t`; an edge at exactly `t` has taken effect.
    pub fn level_at(&self, t: f64) -> QrngBit {
        let flips = self.bit_edges.partition_point(|&e| e <= t);
        flip(self.initial_level, flips)
    }
}

fn flip(level: QrngBit, times: usize) -> QrngBit {
    QrngBit::from_index(level.index() ^ (times & 1))
}

/// Pulse counts per (channel, level) after the AND gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tallies {
    pub h_bit1: u64,
    pub h_bit0: u64,
    pub v_bit1: u64,
    pub v_bit0: u64,
}

impl Tallies {
    pub fn total(&self) -> u64 {
        self.h_bit1 + self.h_bit0 + self.v_bit1 + self.v_bit0
    }

    /// Pulses sorted as expected for an H input with the EOM rotating to V
    /// on bit 0, over those sorted the other way.
    pub fn contrast(&self) -> f64 {
        ratio(self.v_bit0 + self.h_bit1, self.h_bit0 + self.v_bit1)
    }

    /// Count_V / Count_H within bit-0 windows.
    pub fn bit0_contrast(&self) -> f64 {
        ratio(self.v_bit0, self.h_bit0)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    match (num, den) {
        (0, 0) => 0.0,
        (_, 0) => f64::INFINITY,
        _ => num as f64 / den as f64,
    }
}

/// ANDs every pulse with the level delayed by `candidate_delay_ns` (and
/// held through the transition window) and with its inverse.
pub fn classify_pulses(timeline: &SwitchTimeline, candidate_delay_ns: f64) -> Tallies {
    let mut tallies = Tallies::default();
    let edges = &timeline.bit_edges;
    let mut flips = 0;
    for pulse in &timeline.pulses {
        let t = pulse.time_ns - candidate_delay_ns - timeline.transition_window_ns;
        while flips < edges.len() && edges[flips] <= t {
            flips += 1;
        }
        let slot = match (pulse.channel, flip(timeline.initial_level, flips)) {
            (Polarization::H, QrngBit::One) => &mut tallies.h_bit1,
            (Polarization::H, QrngBit::Zero) => &mut tallies.h_bit0,
            (Polarization::V, QrngBit::One) => &mut tallies.v_bit1,
            (Polarization::V, QrngBit::Zero) => &mut tallies.v_bit0,
        };
        *slot += 1;
    }
    tallies
}

/// Result of a delay scan.
#[derive(Clone, Debug, PartialEq)]
pub struct DelayCalibration {
    pub best_delay_ns: f64,
    /// (delay, contrast) for every scanned delay.
    pub curve: Vec<(f64, f64)>,
    /// Set when the contrast does not vary over the scan.
    pub degenerate: bool,
}

/// Scans delays `start, start + step, …, ≤ stop` and keeps the one with the
/// highest [`Tallies::contrast`], preferring the smallest on ties.
pub fn calibrate_delay(
    timeline: &SwitchTimeline,
    scan_range_ns: (f64, f64),
    step_ns: f64,
) -> Result<DelayCalibration> {
    let (start, stop) = scan_range_ns;
    if !(step_ns > 0.0) {
        return Err(Error::InvalidArgument("scan step must be positive".into()));
    }
    if !(start <= stop) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidArgument("scan range is empty".into()));
    }
    let n = ((stop - start) / step_ns + 1e-9) as usize + 1;
    let curve: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let d = start + k as f64 * step_ns;
            (d, classify_pulses(timeline, d).contrast())
        })
        .collect();

    let mut best = curve[0];
    for &(d, c) in &curve[1..] {
        if c > best.1 {
            best = (d, c);
        }
    }
    let flat =
        |c: f64| c == best.1 || (best.1.is_finite() && best.1 - c <= 1e-12 * best.1.max(1.0));
    let degenerate = curve.iter().all(|&(_, c)| flat(c));
    Ok(DelayCalibration {
        best_delay_ns: best.0,
        curve,
        degenerate,
    })
}

/// Level sequence driving a synthetic timeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BitPattern {
    /// QRNG bits from [`qrng_stream`] with the given seed.
    Random(u64),
    Alternating,
    Constant(QrngBit),
}

/// Synthetic Lab 2 recording: H photons hit an EOM that rotates them to V
/// while the lagged level is 0. The EOM keeps its old setting until the
/// transition window after each lagged edge has passed.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchSynth {
    pub pattern: BitPattern,
    pub periods: usize,
    pub pulses_per_period: usize,
    pub lag_ns: f64,
    pub transition_ns: f64,
    /// Probability that a photon outside a transition exits the wrong port.
    pub leakage: f64,
    pub seed: u64,
}

impl Default for SwitchSynth {
    fn default() -> Self {
        Self {
            pattern: BitPattern::Random(1),
            periods: 20_000,
            pulses_per_period: 4,
            lag_ns: ELECTRONICS_LAG_NS,
            transition_ns: TRANSITION_WINDOW_NS,
            leakage: 0.0,
            seed: 2,
        }
    }
}

impl SwitchSynth {
    fn bits(&self) -> Result<BitStream> {
        let n = self.periods.max(1);
        Ok(match self.pattern {
            BitPattern::Random(seed) => qrng_stream(seed, n)?,
            BitPattern::Alternating => {
                BitStream::from_bits(0, (0..n).map(QrngBit::from_index).collect())
            }
            BitPattern::Constant(b) => BitStream::from_bits(0, alloc::vec![b; n]),
        })
    }

    /// Builds the timeline with the classifier delay set to `lag_ns`.
    pub fn build(&self) -> Result<SwitchTimeline> {
        if !(0.0..=1.0).contains(&self.leakage) {
            return Err(Error::InvalidArgument("leakage outside [0, 1]".into()));
        }
        let bits = self.bits()?;
        let edges = bits.edges();
        let initial = bits.bits()[0];
        let settle = self.lag_ns + self.transition_ns;
        let level = |t: f64| flip(initial, edges.partition_point(|&e| e + settle <= t));

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut unit = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let mut pulses = Vec::with_capacity(self.periods * self.pulses_per_period);
        let mut arrivals = Vec::with_capacity(self.pulses_per_period);
        for k in 0..self.periods {
            arrivals.clear();
            for _ in 0..self.pulses_per_period {
                arrivals.push((k as f64 + unit()) * QRNG_PERIOD_NS);
            }
            arrivals.sort_by(f64::total_cmp);
            for &t in &arrivals {
                if pulses
                    .last()
                    .is_some_and(|p: &DetectorPulse| p.time_ns >= t)
                {
                    continue;
                }
                let rotated = (level(t) == QrngBit::Zero) != (unit() < self.leakage);
                let channel = if rotated {
                    Polarization::V
                } else {
                    Polarization::H
                };
                pulses.push(DetectorPulse {
                    time_ns: t,
                    channel,
                });
            }
        }
        SwitchTimeline::new(initial, edges, pulses, self.lag_ns)?
            .with_transition_window(self.transition_ns)
    }
}
