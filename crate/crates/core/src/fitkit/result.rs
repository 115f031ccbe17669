use alloc::string::String;
use alloc::vec::Vec;

/// Outcome of a fit. Parameters held fixed report a standard error of 0.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub names: Vec<String>,
    pub parameters: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// √Σ rᵢ² over the weighted residuals.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Which multi-start produced the result.
    pub start_index: usize,
    /// Residual norm at each start point.
    pub start_residual_norms: Vec<f64>,
    /// Weighted residuals at the solution.
    pub residuals: Vec<f64>,
}

impl FitResult {
    fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.parameters[i])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.std_errors[i])
    }
}
