//! Analytic expressions for the ideal conditionals and the noisy joint table.

use core::f64::consts::SQRT_2;

use libm::{cos, sin, sqrt};

use crate::qcore::Polarization;
use crate::{Error, Result};

use super::pipeline::DEGENERATE_CONDITIONING;
use super::{AncillaOutcome, Diagonal, ExperimentSetting, NoiseModel, Outcome, OutcomeTable};

fn sq(x: f64) -> f64 {
    x * x
}

/// Ideal P_C(H) = ½cos²α + sin²α sin²(φ/2). Independent of δ.
pub fn p_classical(phi: f64, alpha: f64) -> f64 {
    0.5 * sq(cos(alpha)) + sq(sin(alpha)) * sq(sin(phi / 2.0))
}

/// Ideal P_C(V) = ½cos²α + sin²α cos²(φ/2).
pub fn p_classical_v(phi: f64, alpha: f64) -> f64 {
    0.5 * sq(cos(alpha)) + sq(sin(alpha)) * sq(cos(phi / 2.0))
}

/// Denominator of the ideal quantum conditional,
/// 1 + √2 cos α sin α [sin(φ/2) sin(φ/2 + δ) − cos(φ/2) cos(φ/2 − δ)].
pub fn quantum_denominator(phi: f64, alpha: f64, delta: f64) -> f64 {
    let h = phi / 2.0;
    1.0 + SQRT_2 * cos(alpha) * sin(alpha) * (sin(h) * sin(h + delta) - cos(h) * cos(h - delta))
}

/// Normalization C_S = (1 − √2 cos α sin α cos φ cos δ)^(−1/2) of the
/// post-selected S state.
pub fn normalization_constant(phi: f64, alpha: f64, delta: f64) -> f64 {
    1.0 / sqrt(1.0 - SQRT_2 * cos(alpha) * sin(alpha) * cos(phi) * cos(delta))
}

fn checked_quantum(numerator: f64, phi: f64, alpha: f64, delta: f64) -> Result<f64> {
    let den = quantum_denominator(phi, alpha, delta);
    if den.abs() < DEGENERATE_CONDITIONING {
        return Err(Error::DegenerateConditioning(den));
    }
    Ok(numerator / den)
}

/// Ideal P_Q(H).
pub fn p_quantum(phi: f64, alpha: f64, delta: f64) -> Result<f64> {
    let h = phi / 2.0;
    let num = 0.5 * sq(cos(alpha))
        + sq(sin(alpha)) * sq(sin(h))
        + SQRT_2 * cos(alpha) * sin(alpha) * sin(h) * sin(h + delta);
    checked_quantum(num, phi, alpha, delta)
}

/// Ideal P_Q(V).
pub fn p_quantum_v(phi: f64, alpha: f64, delta: f64) -> Result<f64> {
    let h = phi / 2.0;
    let num = 0.5 * sq(cos(alpha)) + sq(sin(alpha)) * sq(cos(h))
        - SQRT_2 * cos(alpha) * sin(alpha) * cos(h) * cos(h - delta);
    checked_quantum(num, phi, alpha, delta)
}

/// P_C(H) at α = π/4.
pub fn p_classical_fixed_alpha(phi: f64) -> f64 {
    0.25 + 0.5 * sq(sin(phi / 2.0))
}

/// P_C(V) at α = π/4.
pub fn p_classical_fixed_alpha_v(phi: f64) -> f64 {
    0.25 + 0.5 * sq(cos(phi / 2.0))
}

fn fixed_alpha_denominator(phi: f64, delta: f64) -> f64 {
    let h = phi / 2.0;
    1.0 + (sin(h) * sin(h + delta) - cos(h) * cos(h - delta)) / SQRT_2
}

fn checked_fixed_alpha(numerator: f64, phi: f64, delta: f64) -> Result<f64> {
    let den = fixed_alpha_denominator(phi, delta);
    if den.abs() < DEGENERATE_CONDITIONING {
        return Err(Error::DegenerateConditioning(den));
    }
    Ok(numerator / den)
}

/// P_Q(H) at α = π/4.
pub fn p_quantum_fixed_alpha(phi: f64, delta: f64) -> Result<f64> {
    let h = phi / 2.0;
    let num = 0.25 + 0.5 * sq(sin(h)) + sin(h) * sin(h + delta) / SQRT_2;
    checked_fixed_alpha(num, phi, delta)
}

/// P_Q(V) at α = π/4.
pub fn p_quantum_fixed_alpha_v(phi: f64, delta: f64) -> Result<f64> {
    let h = phi / 2.0;
    let num = 0.25 + 0.5 * sq(cos(h)) - cos(h) * cos(h - delta) / SQRT_2;
    checked_fixed_alpha(num, phi, delta)
}

/// Probability that the trigger photon T reads H, (1 + F₁F₃)/2.
pub fn trigger_probability(noise: &NoiseModel) -> f64 {
    0.5 * (1.0 + noise.f1() * noise.f3())
}

/// A joint entry split by fidelity monomial:
/// 32 P = k0 + F₁F₃ k13 + F₂F₃ k23 + F₁F₂F₃ k123.
///
/// Holds the trigonometry for one (outcome, φ, α, δ) so fitters can
/// re-evaluate at many fidelities cheaply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointCoefficients {
    k0: f64,
    k13: f64,
    k23: f64,
    k123: f64,
}

impl JointCoefficients {
    /// `alpha` is the projection angle actually applied to A.
    pub fn new(outcome: Outcome, phi: f64, alpha: f64, delta: f64) -> Self {
        let eps = match outcome.s {
            Polarization::H => 1.0,
            Polarization::V => -1.0,
        };
        let sigma = match outcome.c {
            Diagonal::Plus => 1.0,
            Diagonal::Minus => -1.0,
        };
        // The |α⟩ branch is the |α⊥⟩ branch at α + π/2.
        let flip = match outcome.a {
            AncillaOutcome::AlphaPerp => 1.0,
            AncillaOutcome::Alpha => -1.0,
        };
        let s2 = flip * sin(2.0 * alpha);
        let c2 = flip * cos(2.0 * alpha);
        let coherence = -eps * sigma * SQRT_2 * s2 * cos(delta);
        Self {
            k0: 2.0,
            k13: 2.0 * (1.0 - eps * cos(phi)),
            k23: coherence,
            k123: 2.0 * eps * cos(phi) * c2
                + coherence
                + sigma * 2.0 * SQRT_2 * s2 * cos(delta + eps * phi),
        }
    }

    /// Joint probability at fidelities `f` (not range-checked).
    pub fn probability(&self, f: [f64; 3]) -> f64 {
        let [f1, f2, f3] = f;
        (self.k0 + f1 * f3 * self.k13 + f2 * f3 * self.k23 + f1 * f2 * f3 * self.k123) / 32.0
    }

    /// Gradient of [`Self::probability`] with respect to `f`.
    pub fn gradient(&self, f: [f64; 3]) -> [f64; 3] {
        let [f1, f2, f3] = f;
        [
            (f3 * self.k13 + f2 * f3 * self.k123) / 32.0,
            (f3 * self.k23 + f1 * f3 * self.k123) / 32.0,
            (f1 * self.k13 + f2 * self.k23 + f1 * f2 * self.k123) / 32.0,
        ]
    }
}

/// Joint probability P(s, c, a, T = H) with A projected at angle `alpha`.
pub fn joint_probability(
    outcome: Outcome,
    phi: f64,
    alpha: f64,
    delta: f64,
    noise: &NoiseModel,
) -> f64 {
    JointCoefficients::new(outcome, phi, alpha, delta).probability(noise.to_array())
}

/// Gradient of [`joint_probability`] with respect to (F₁, F₂, F₃).
pub fn joint_probability_gradient(
    outcome: Outcome,
    phi: f64,
    alpha: f64,
    delta: f64,
    noise: &NoiseModel,
) -> [f64; 3] {
    JointCoefficients::new(outcome, phi, alpha, delta).gradient(noise.to_array())
}

/// Analytic counterpart of [`super::run_pipeline`].
pub fn closed_form_table(setting: &ExperimentSetting, noise: &NoiseModel) -> OutcomeTable {
    let alpha = setting.effective_alpha();
    let mut joint = [0.0; 8];
    for outcome in Outcome::ALL {
        joint[outcome.index()] =
            joint_probability(outcome, setting.phi, alpha, setting.delta, noise);
    }
    OutcomeTable {
        setting: *setting,
        joint,
    }
}
