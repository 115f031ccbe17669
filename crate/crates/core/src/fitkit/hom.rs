//! Hong–Ou–Mandel dips at the partially polarizing splitter.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use libm::{exp, sqrt};

use crate::{Error, Result};

use super::lm::{covariance_diagonal, multi_start, Bounds, Residuals, SolverOptions};
use super::FitResult;

/// Ideal dip contrast (Max − Min)/Max for two V photons meeting on a
/// splitter with V transmission `t_v`. Distinguishable photons give
/// coincidences t² + (1 − t)²; indistinguishable ones (2t − 1)².
pub fn hom_contrast_ideal(t_v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t_v) {
        return Err(Error::InvalidArgument(alloc::format!(
            "transmission {t_v} outside [0, 1]"
        )));
    }
    let r = 1.0 - t_v;
    Ok(2.0 * t_v * r / (t_v * t_v + r * r))
}

pub const HOM_PARAM_NAMES: [&str; 4] = ["baseline", "visibility", "center", "width"];

/// Gaussian dip `baseline·(1 − visibility·exp(−(x − center)²/(2·width²)))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomDipModel {
    pub baseline: f64,
    pub visibility: f64,
    pub center: f64,
    pub width: f64,
}

impl HomDipModel {
    pub fn value(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.width;
        self.baseline * (1.0 - self.visibility * exp(-0.5 * u * u))
    }

    pub fn from_params(p: &[f64]) -> Self {
        Self {
            baseline: p[0],
            visibility: p[1],
            center: p[2],
            width: p[3],
        }
    }

    pub fn from_fit(fit: &FitResult) -> Self {
        Self::from_params(&fit.parameters)
    }

    pub fn params(&self) -> [f64; 4] {
        [self.baseline, self.visibility, self.center, self.width]
    }
}

pub(crate) struct DipProblem {
    x: Vec<f64>,
    y: Vec<f64>,
    sigma: Vec<f64>,
}

impl DipProblem {
    pub(crate) fn new(points: &[(f64, f64)]) -> Self {
        Self {
            x: points.iter().map(|p| p.0).collect(),
            y: points.iter().map(|p| p.1).collect(),
            sigma: points.iter().map(|p| sqrt(p.1.max(1.0))).collect(),
        }
    }
}

impl Residuals for DipProblem {
    fn num_residuals(&self) -> usize {
        self.x.len()
    }

    fn num_params(&self) -> usize {
        4
    }

    fn residuals(&self, p: &[f64], out: &mut [f64]) {
        let m = HomDipModel::from_params(p);
        for (i, r) in out.iter_mut().enumerate() {
            *r = (self.y[i] - m.value(self.x[i])) / self.sigma[i];
        }
    }

    fn jacobian(&self, p: &[f64], out: &mut [f64]) {
        let [b, v, c, w] = [p[0], p[1], p[2], p[3]];
        for (i, row) in out.chunks_exact_mut(4).enumerate() {
            let d = self.x[i] - c;
            let e = exp(-0.5 * d * d / (w * w));
            let s = -1.0 / self.sigma[i];
            row[0] = s * (1.0 - v * e);
            row[1] = s * (-b * e);
            row[2] = s * (-b * v * e * d / (w * w));
            row[3] = s * (-b * v * e * d * d / (w * w * w));
        }
    }
}

/// Fits a Gaussian dip to (position, counts) with Poisson weights.
pub fn fit_hom_dip(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 5 {
        return Err(Error::InvalidArgument(alloc::format!(
            "{} points; a dip fit needs at least 5",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(x, y)| !x.is_finite() || !y.is_finite() || y < 0.0)
    {
        return Err(Error::InvalidArgument(
            "positions must be finite and counts non-negative".into(),
        ));
    }
    let ymax = points.iter().map(|p| p.1).fold(0.0, f64::max);
    if ymax == 0.0 {
        return Err(Error::InsufficientData("all counts are zero".into()));
    }
    let xmin = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let span = xmax - xmin;
    if !(span > 0.0) {
        return Err(Error::InvalidArgument(
            "positions must not all coincide".into(),
        ));
    }

    let problem = DipProblem::new(points);
    let bounds = Bounds::new(
        vec![0.0, 0.0, xmin - span, 1e-4 * span],
        vec![10.0 * ymax + 10.0, 1.0, xmax + span, 10.0 * span],
    );
    let (x_at_min, ymin) =
        points.iter().copied().fold(
            (xmin, f64::INFINITY),
            |acc, p| if p.1 < acc.1 { p } else { acc },
        );
    let vis = (1.0 - ymin / ymax).clamp(0.05, 0.95);
    let starts: Vec<Vec<f64>> = [0.02, 0.05, 0.1, 0.2, 0.4]
        .iter()
        .map(|f| vec![ymax, vis, x_at_min, f * span])
        .collect();

    let (best, solutions) = multi_start(&problem, &starts, &bounds, &SolverOptions::default());
    let sol = &solutions[best];
    let mut jac = vec![0.0; problem.num_residuals() * 4];
    problem.jacobian(&sol.params, &mut jac);
    let std_errors = covariance_diagonal(&jac, 4).into_iter().map(sqrt).collect();

    Ok(FitResult {
        names: HOM_PARAM_NAMES.iter().map(|s| s.to_string()).collect(),
        parameters: sol.params.clone(),
        std_errors,
        residual_norm: sol.residual_norm,
        iterations: sol.iterations,
        converged: sol.converged,
        start_index: best,
        start_residual_norms: solutions.iter().map(|s| s.initial_residual_norm).collect(),
        residuals: sol.residuals.clone(),
    })
}
