//! Fitting (F₁, F₂, F₃) to binned counts.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use libm::{pow, sqrt};

use crate::counts::{BinKey, BinTable};
use crate::optics::JointCoefficients;
use crate::{Error, Result};

use super::lm::{covariance_diagonal, multi_start, Bounds, Residuals, SolverOptions};
use super::FitResult;

pub const NOISE_PARAM_NAMES: [&str; 3] = ["f1", "f2", "f3"];

/// Which fidelities to fit; `Some(v)` pins a parameter at `v`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NoiseFitConfig {
    pub frozen: [Option<f64>; 3],
    pub options: Option<SolverOptions>,
}

impl NoiseFitConfig {
    pub fn joint() -> Self {
        Self::default()
    }

    pub fn freeze(mut self, index: usize, value: f64) -> Self {
        self.frozen[index] = Some(value);
        self
    }
}

struct Observation {
    coeffs: JointCoefficients,
    fraction: f64,
    sigma: f64,
}

pub(crate) struct NoiseProblem {
    obs: Vec<Observation>,
    free: Vec<usize>,
    fixed: [f64; 3],
}

impl NoiseProblem {
    fn new(data: &[BinTable], config: &NoiseFitConfig) -> Result<Self> {
        let mut obs = Vec::new();
        let mut usable = 0;
        for table in data {
            let total = table.total();
            if !(total > 0.0) {
                continue;
            }
            usable += 1;
            for key in BinKey::all() {
                let s = table.setting.with_bit(key.bit);
                let count = table.get(key);
                obs.push(Observation {
                    coeffs: JointCoefficients::new(
                        key.outcome,
                        s.phi,
                        s.effective_alpha(),
                        s.delta,
                    ),
                    fraction: count / total,
                    // Zero-count bins get the Poisson floor σ = 1 count.
                    sigma: sqrt(count.max(1.0)) / total,
                });
            }
        }
        if usable < 3 {
            return Err(Error::InsufficientData(alloc::format!(
                "{usable} grid points with counts; need at least 3"
            )));
        }
        for f in config.frozen.iter().flatten() {
            if !(0.0..=1.0).contains(f) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "frozen fidelity {f} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            obs,
            free: (0..3).filter(|&i| config.frozen[i].is_none()).collect(),
            fixed: config.frozen.map(|f| f.unwrap_or(0.0)),
        })
    }

    fn full(&self, p: &[f64]) -> [f64; 3] {
        let mut f = self.fixed;
        for (k, &i) in self.free.iter().enumerate() {
            f[i] = p[k];
        }
        f
    }
}

impl Residuals for NoiseProblem {
    fn num_residuals(&self) -> usize {
        self.obs.len()
    }

    fn num_params(&self) -> usize {
        self.free.len()
    }

    fn residuals(&self, p: &[f64], out: &mut [f64]) {
        let f = self.full(p);
        let z = 0.5 * (1.0 + f[0] * f[2]);
        for (o, r) in self.obs.iter().zip(out) {
            let model = 0.5 * o.coeffs.probability(f) / z;
            *r = (o.fraction - model) / o.sigma;
        }
    }

    fn jacobian(&self, p: &[f64], out: &mut [f64]) {
        let f = self.full(p);
        let z = 0.5 * (1.0 + f[0] * f[2]);
        let dz = [0.5 * f[2], 0.0, 0.5 * f[0]];
        let n = self.free.len();
        for (o, row) in self.obs.iter().zip(out.chunks_exact_mut(n.max(1))) {
            let j = o.coeffs.probability(f);
            let dj = o.coeffs.gradient(f);
            for (k, &i) in self.free.iter().enumerate() {
                let dmodel = 0.5 * (dj[i] * z - j * dz[i]) / (z * z);
                row[k] = -dmodel / o.sigma;
            }
        }
    }
}

/// Start lattice with at least 8 points over the free dimensions.
fn lattice(dims: usize) -> Vec<Vec<f64>> {
    if dims == 0 {
        return vec![Vec::new()];
    }
    let mut levels = 2;
    while pow(levels as f64, dims as f64) < 8.0 {
        levels += 1;
    }
    let values: Vec<f64> = (0..levels)
        .map(|i| 0.3 + 0.65 * i as f64 / (levels - 1) as f64)
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..dims {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Fits the fidelities to per-point bins by weighted least squares on the
/// bin fractions. The model for a bin is ½·P(s,c,a,T=H)/P(T=H) with the
/// QRNG bit choosing the projection angle.
pub fn fit_noise_params(data: &[BinTable], config: &NoiseFitConfig) -> Result<FitResult> {
    let problem = NoiseProblem::new(data, config)?;
    let options = config.options.unwrap_or_default();
    let n = problem.free.len();
    let bounds = Bounds::uniform(n, 0.0, 1.0);
    let starts = lattice(n);

    let (best, solutions) = multi_start(&problem, &starts, &bounds, &options);
    let sol = &solutions[best];

    let mut jac = vec![0.0; problem.num_residuals() * n];
    if n > 0 {
        problem.jacobian(&sol.params, &mut jac);
    }
    let var = covariance_diagonal(&jac, n);
    let parameters = problem.full(&sol.params);
    let mut std_errors = [0.0; 3];
    for (k, &i) in problem.free.iter().enumerate() {
        std_errors[i] = sqrt(var[k]);
    }

    Ok(FitResult {
        names: NOISE_PARAM_NAMES.iter().map(|s| s.to_string()).collect(),
        parameters: parameters.to_vec(),
        std_errors: std_errors.to_vec(),
        residual_norm: sol.residual_norm,
        iterations: sol.iterations,
        converged: sol.converged,
        start_index: best,
        start_residual_norms: solutions.iter().map(|s| s.initial_residual_norm).collect(),
        residuals: sol.residuals.clone(),
    })
}

#[cfg(test)]
pub(crate) fn problem_for_tests(data: &[BinTable]) -> NoiseProblem {
    NoiseProblem::new(data, &NoiseFitConfig::joint()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::lattice;

    #[test]
    fn lattice_has_enough_starts() {
        assert_eq!(lattice(3).len(), 8);
        assert_eq!(lattice(2).len(), 9);
        assert_eq!(lattice(1).len(), 8);
        assert_eq!(lattice(0).len(), 1);
    }
}
