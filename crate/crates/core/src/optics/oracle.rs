//! Ideal conditionals computed by projecting the gate-built final state,
//! independent of the closed forms.

use crate::qcore::{Polarization, PureState, QubitLabel};
use crate::{Error, Result};

use super::states::{alpha_perp_state, final_state, minus_state};
use QubitLabel::{A, C, S, T};

/// Ideal P_C and P_Q for both S outcomes at one (φ, α, δ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealConditionals {
    pub classical_h: f64,
    pub classical_v: f64,
    pub quantum_h: f64,
    pub quantum_v: f64,
}

fn conditioning(err: Error) -> Error {
    match err {
        Error::DegenerateProjection(p) => Error::DegenerateConditioning(p),
        other => other,
    }
}

/// Projects A onto |α⊥⟩ and T onto |H⟩, then either traces out C
/// (classical) or projects C onto |−⟩ (quantum).
pub fn brute_force_conditionals(phi: f64, alpha: f64, delta: f64) -> Result<IdealConditionals> {
    let psi = final_state(phi, delta);
    let (_, sct) = psi
        .project(A, &alpha_perp_state(A, alpha))
        .map_err(conditioning)?;
    let (_, sc) = sct
        .project(T, &PureState::basis(T, Polarization::H))
        .map_err(conditioning)?;

    let rho_s = sc.to_density().partial_trace(&[S])?;
    let classical_h = rho_s.element(0, 0).re;
    let classical_v = rho_s.element(1, 1).re;

    let (_, s) = sc.project(C, &minus_state(C)).map_err(conditioning)?;
    let amps = s.amplitudes();
    Ok(IdealConditionals {
        classical_h,
        classical_v,
        quantum_h: amps[0].norm_sqr(),
        quantum_v: amps[1].norm_sqr(),
    })
}
