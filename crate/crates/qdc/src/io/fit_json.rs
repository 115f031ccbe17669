use std::collections::BTreeMap;

use qdc_core::fitkit::FitResult;
use serde::Serialize;

/// JSON form of a fit. Infinite standard errors serialize as `null`.
#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub parameters: BTreeMap<String, f64>,
    pub std_errors: BTreeMap<String, f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub start_index: usize,
}

impl From<&FitResult> for FitReport {
    fn from(fit: &FitResult) -> Self {
        let zip = |values: &[f64]| {
            fit.names
                .iter()
                .cloned()
                .zip(values.iter().copied())
                .collect::<BTreeMap<_, _>>()
        };
        Self {
            parameters: zip(&fit.parameters),
            std_errors: zip(&fit.std_errors),
            residual_norm: fit.residual_norm,
            iterations: fit.iterations,
            converged: fit.converged,
            start_index: fit.start_index,
        }
    }
}
