use crate::qcore::{mix, DensityMatrix, Gate, Polarization, PureState, QubitLabel};
use crate::{Error, Result};

use super::states::{
    make_noisy_sources, minus_state, mzi_input_gate, plus_state, white_noise_sca_t,
};
use super::{AncillaOutcome, Diagonal, ExperimentSetting, NoiseModel, Outcome};
use QubitLabel::{A, C, S, T};

/// Post-selection probabilities below this are treated as degenerate.
pub const DEGENERATE_CONDITIONING: f64 = 1e-12;

/// Joint probabilities P(s, c, a, T = H) for one setting.
///
/// Entries are *not* renormalized by the trigger probability; use
/// [`OutcomeTable::conditional`] for probabilities given a trigger click.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeTable {
    pub setting: ExperimentSetting,
    pub joint: [f64; 8],
}

impl OutcomeTable {
    pub fn get(&self, outcome: Outcome) -> f64 {
        self.joint[outcome.index()]
    }

    /// P(T = H), the sum of all joint entries.
    pub fn trigger_probability(&self) -> f64 {
        self.joint.iter().sum()
    }

    /// P(s, c, a | T = H).
    pub fn conditional(&self, outcome: Outcome) -> f64 {
        self.get(outcome) / self.trigger_probability()
    }

    pub fn conditional_table(&self) -> [f64; 8] {
        let z = self.trigger_probability();
        self.joint.map(|p| p / z)
    }

    /// Classical inference: P(S = s | A = α⊥, T = H), summed over C.
    pub fn classical(&self, s: Polarization) -> Result<f64> {
        let marginal = |s| {
            [Diagonal::Plus, Diagonal::Minus]
                .iter()
                .map(|&c| self.get(Outcome::new(s, c, AncillaOutcome::AlphaPerp)))
                .sum::<f64>()
        };
        self.ratio(
            marginal(s),
            marginal(Polarization::H) + marginal(Polarization::V),
        )
    }

    /// Quantum inference: P(S = s | C = −, A = α⊥, T = H).
    pub fn quantum(&self, s: Polarization) -> Result<f64> {
        let entry = |s| self.get(Outcome::new(s, Diagonal::Minus, AncillaOutcome::AlphaPerp));
        self.ratio(entry(s), entry(Polarization::H) + entry(Polarization::V))
    }

    fn ratio(&self, num: f64, den: f64) -> Result<f64> {
        let conditioned = den / self.trigger_probability();
        if !(conditioned >= DEGENERATE_CONDITIONING) {
            return Err(Error::DegenerateConditioning(conditioned));
        }
        Ok(num / den)
    }
}

/// Runs the full density-matrix model for one setting.
///
/// Sources are Werner-mixed, S passes H, Phi(φ), W, A is rotated by the
/// effective α, then the CZ between C and S, a white-noise channel of
/// weight 1 − F₃, and the final W on S.
pub fn run_pipeline(setting: &ExperimentSetting, noise: &NoiseModel) -> OutcomeTable {
    let rho = evolve(setting, noise).expect("fixed labels");
    let mut joint = [0.0; 8];
    for outcome in Outcome::ALL {
        joint[outcome.index()] = rho
            .expectation(&detection_ket(outcome))
            .expect("same labels");
    }
    OutcomeTable {
        setting: *setting,
        joint,
    }
}

/// The four-photon density matrix just before detection.
pub fn evolve(setting: &ExperimentSetting, noise: &NoiseModel) -> Result<DensityMatrix> {
    let (st, ca) = make_noisy_sources(noise, setting.delta);
    let rho = st.tensor(&ca)?.reorder(&[S, C, A, T])?;
    let rho = rho
        .apply(&mzi_input_gate(setting.phi), &[S])?
        .apply(&Gate::alpha(setting.effective_alpha()), &[A])?
        .apply(&Gate::cz(), &[C, S])?;
    let rho = mix(&rho, &white_noise_sca_t(), noise.f3())?;
    rho.apply(&Gate::w(), &[S])
}

/// Detector projection for an outcome in (S, C, A, T) order. After the α
/// rotation, |α⊥⟩ reads out as V and |α⟩ as H.
pub fn detection_ket(outcome: Outcome) -> PureState {
    let c = match outcome.c {
        Diagonal::Plus => plus_state(C),
        Diagonal::Minus => minus_state(C),
    };
    let a = match outcome.a {
        AncillaOutcome::Alpha => Polarization::H,
        AncillaOutcome::AlphaPerp => Polarization::V,
    };
    PureState::basis(S, outcome.s)
        .tensor(&c)
        .and_then(|k| k.tensor(&PureState::basis(A, a)))
        .and_then(|k| k.tensor(&PureState::basis(T, Polarization::H)))
        .expect("disjoint labels")
}
