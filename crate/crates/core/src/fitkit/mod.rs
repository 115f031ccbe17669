//! Least-squares fitting: noise fidelities from counts, HOM dips and the
//! dip-position drift with φ.

mod hom;
mod hwp;
mod linear;
pub mod lm;
mod noise;
mod result;

pub use hom::{fit_hom_dip, hom_contrast_ideal, HomDipModel, HOM_PARAM_NAMES};
pub use hwp::hwp_to_alpha;
pub use linear::fit_dip_position_vs_phi;
pub use noise::{fit_noise_params, NoiseFitConfig, NOISE_PARAM_NAMES};
pub use result::FitResult;
