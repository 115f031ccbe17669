//! Single-photon basis states and the source states of the experiment.

use alloc::vec;
use core::f64::consts::FRAC_1_SQRT_2;

use libm::{cos, sin};

use crate::qcore::{mix, DensityMatrix, Gate, Polarization, PureState, QubitLabel, C64};

use super::NoiseModel;
use QubitLabel::{A, C, S, T};

fn qubit(label: QubitLabel, h: C64, v: C64) -> PureState {
    PureState::qubit(label, h, v).expect("non-zero amplitudes")
}

/// |p⟩ = (|H⟩ − e^{iφ}|V⟩)/√2, the particle state of S.
pub fn particle_state(phi: f64) -> PureState {
    qubit(
        S,
        C64::new(FRAC_1_SQRT_2, 0.0),
        -C64::from_polar(FRAC_1_SQRT_2, phi),
    )
}

/// |w⟩ = e^{iφ/2}(−i sin(φ/2)|H⟩ + cos(φ/2)|V⟩), the wave state of S.
pub fn wave_state(phi: f64) -> PureState {
    let g = C64::from_polar(1.0, phi / 2.0);
    qubit(
        S,
        g * C64::new(0.0, -sin(phi / 2.0)),
        g * C64::new(cos(phi / 2.0), 0.0),
    )
}

/// (|H⟩ + |V⟩)/√2
pub fn plus_state(label: QubitLabel) -> PureState {
    qubit(label, C64::new(1.0, 0.0), C64::new(1.0, 0.0))
}

/// (|H⟩ − |V⟩)/√2
pub fn minus_state(label: QubitLabel) -> PureState {
    qubit(label, C64::new(1.0, 0.0), C64::new(-1.0, 0.0))
}

/// |α⟩ = cos α|H⟩ + sin α|V⟩
pub fn alpha_state(label: QubitLabel, alpha: f64) -> PureState {
    qubit(label, C64::new(cos(alpha), 0.0), C64::new(sin(alpha), 0.0))
}

/// |α⊥⟩ = sin α|H⟩ − cos α|V⟩
pub fn alpha_perp_state(label: QubitLabel, alpha: f64) -> PureState {
    qubit(label, C64::new(sin(alpha), 0.0), C64::new(-cos(alpha), 0.0))
}

/// (|HV⟩ + e^{iδ}|VH⟩)/√2 over (C, A).
pub fn pair_state(delta: f64) -> PureState {
    let h = FRAC_1_SQRT_2;
    PureState::from_raw(
        vec![C, A],
        vec![
            C64::new(0.0, 0.0),
            C64::new(h, 0.0),
            C64::from_polar(h, delta),
            C64::new(0.0, 0.0),
        ],
    )
}

/// |V⟩_S ⊗ (|HV⟩ + e^{iδ}|VH⟩)_CA/√2 ⊗ |H⟩_T in (S, C, A, T) order.
pub fn make_initial_state(delta: f64) -> PureState {
    let s = PureState::basis(S, Polarization::V);
    let t = PureState::basis(T, Polarization::H);
    s.tensor(&pair_state(delta))
        .and_then(|sca| sca.tensor(&t))
        .expect("disjoint labels")
}

/// Werner-mixed sources ρ'_ST = F₁|VH⟩⟨VH| + (1 − F₁)I/4 and
/// ρ'_CA = F₂|ψ_δ⟩⟨ψ_δ| + (1 − F₂)I/4.
pub fn make_noisy_sources(noise: &NoiseModel, delta: f64) -> (DensityMatrix, DensityMatrix) {
    let st = PureState::product(&[S, T], &[Polarization::V, Polarization::H])
        .expect("two labels")
        .to_density();
    let ca = pair_state(delta).to_density();
    let white_st = DensityMatrix::maximally_mixed(vec![S, T]).expect("distinct");
    let white_ca = DensityMatrix::maximally_mixed(vec![C, A]).expect("distinct");
    (
        mix(&st, &white_st, noise.f1()).expect("same labels"),
        mix(&ca, &white_ca, noise.f2()).expect("same labels"),
    )
}

/// Gate sequence applied to S before the CZ: H, then Phi(φ), then W.
pub fn mzi_input_gate(phi: f64) -> Gate {
    Gate::w()
        .after(&Gate::phase(phi))
        .and_then(|g| g.after(&Gate::hadamard()))
        .expect("single-qubit gates")
}

/// The interferometer output before any measurement on A:
/// (|p⟩|H⟩|V⟩ + e^{iδ}|w⟩|V⟩|H⟩)/√2 ⊗ |H⟩_T, built by running the gates.
pub fn final_state(phi: f64, delta: f64) -> PureState {
    make_initial_state(delta)
        .apply(&mzi_input_gate(phi), &[S])
        .and_then(|st| st.apply(&Gate::cz(), &[C, S]))
        .and_then(|st| st.apply(&Gate::w(), &[S]))
        .expect("labels present")
}

/// The same state assembled directly from |p⟩ and |w⟩.
pub fn final_state_from_branches(phi: f64, delta: f64) -> PureState {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let particle = particle_state(phi);
    let wave = wave_state(phi);
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    // (S, C, A, T) big-endian: S bit 3, C bit 2, A bit 1, T bit 0
    for s in 0..2 {
        amps[(s << 3) | 0b0010] += h * particle.amplitudes()[s];
        amps[(s << 3) | 0b0100] += h * C64::from_polar(1.0, delta) * wave.amplitudes()[s];
    }
    PureState::new(vec![S, C, A, T], amps).expect("normalized")
}

/// I/16 over (S, C, A, T).
pub(crate) fn white_noise_sca_t() -> DensityMatrix {
    DensityMatrix::maximally_mixed(vec![S, C, A, T]).expect("distinct")
}
