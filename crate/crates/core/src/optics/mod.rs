//! Optical model of the controlled interferometer: source states, the
//! noisy density-matrix pipeline and the analytic probabilities it must
//! reproduce.

mod closed_form;
mod oracle;
mod pipeline;
mod setting;
mod states;
mod visibility;

pub use closed_form::{
    closed_form_table, joint_probability, joint_probability_gradient, normalization_constant,
    p_classical, p_classical_fixed_alpha, p_classical_fixed_alpha_v, p_classical_v, p_quantum,
    p_quantum_fixed_alpha, p_quantum_fixed_alpha_v, p_quantum_v, quantum_denominator,
    trigger_probability, JointCoefficients,
};
pub use oracle::{brute_force_conditionals, IdealConditionals};
pub use pipeline::{detection_ket, evolve, run_pipeline, OutcomeTable, DEGENERATE_CONDITIONING};
pub use setting::{AncillaOutcome, Diagonal, ExperimentSetting, NoiseModel, Outcome, QrngBit};
pub use states::{
    alpha_perp_state, alpha_state, final_state, final_state_from_branches, make_initial_state,
    make_noisy_sources, minus_state, mzi_input_gate, pair_state, particle_state, plus_state,
    wave_state,
};
pub use visibility::{
    unconditional_p_h, unconditional_visibility, unconditional_visibility_at,
    VISIBILITY_GRID_POINTS,
};
