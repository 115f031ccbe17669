use alloc::string::ToString;
use alloc::vec::Vec;

use libm::sqrt;

use crate::{Error, Result};

use super::FitResult;

/// Weighted straight-line fit of dip center (mm) against φ (rad).
/// Each point is `(phi, center, sigma)`.
pub fn fit_dip_position_vs_phi(points: &[(f64, f64, f64)]) -> Result<FitResult> {
    if points
        .iter()
        .any(|&(x, y, s)| !x.is_finite() || !y.is_finite() || !(s > 0.0) || !s.is_finite())
    {
        return Err(Error::InvalidArgument(
            "points need finite values and positive uncertainties".into(),
        ));
    }
    let distinct = points
        .iter()
        .any(|p| points.first().is_some_and(|q| p.0 != q.0));
    if points.len() < 2 || !distinct {
        return Err(Error::InvalidArgument(
            "need at least two distinct phi values".into(),
        ));
    }

    let w: Vec<f64> = points.iter().map(|p| 1.0 / (p.2 * p.2)).collect();
    let sw: f64 = w.iter().sum();
    let xbar = points.iter().zip(&w).map(|(p, w)| w * p.0).sum::<f64>() / sw;
    let ybar = points.iter().zip(&w).map(|(p, w)| w * p.1).sum::<f64>() / sw;
    let sxx: f64 = points
        .iter()
        .zip(&w)
        .map(|(p, w)| w * (p.0 - xbar).powi(2))
        .sum();
    let sxy: f64 = points
        .iter()
        .zip(&w)
        .map(|(p, w)| w * (p.0 - xbar) * (p.1 - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let slope_err = sqrt(1.0 / sxx);
    let intercept_err = sqrt(1.0 / sw + xbar * xbar / sxx);

    let residuals: Vec<f64> = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)) / p.2)
        .collect();
    let residual_norm = sqrt(residuals.iter().map(|r| r * r).sum());
    Ok(FitResult {
        names: ["slope", "intercept"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        parameters: alloc::vec![slope, intercept],
        std_errors: alloc::vec![slope_err, intercept_err],
        residual_norm,
        iterations: 0,
        converged: true,
        start_index: 0,
        start_residual_norms: alloc::vec![residual_norm],
        residuals,
    })
}
