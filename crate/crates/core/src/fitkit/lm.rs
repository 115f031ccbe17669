//! Bounded Levenberg–Marquardt with an active set.

use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

/// A least-squares problem: minimize ½‖r(p)‖².
pub trait Residuals {
    fn num_residuals(&self) -> usize;
    fn num_params(&self) -> usize;
    fn residuals(&self, p: &[f64], out: &mut [f64]);
    /// Row-major ∂rᵢ/∂pⱼ, `num_residuals × num_params`.
    fn jacobian(&self, p: &[f64], out: &mut [f64]);
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        debug_assert_eq!(lower.len(), upper.len());
        Self { lower, upper }
    }

    pub fn uniform(n: usize, lower: f64, upper: f64) -> Self {
        Self::new(vec![lower; n], vec![upper; n])
    }

    pub fn clamp(&self, p: &mut [f64]) {
        for (i, x) in p.iter_mut().enumerate() {
            *x = x.clamp(self.lower[i], self.upper[i]);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Largest allowed cosine between r and any free Jacobian column.
    pub gradient_tolerance: f64,
    /// Relative step size below which the iteration stops.
    pub step_tolerance: f64,
    /// Relative cost reduction below which the iteration stops.
    pub cost_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            gradient_tolerance: 1e-10,
            step_tolerance: 1e-12,
            cost_tolerance: 1e-14,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub params: Vec<f64>,
    pub residuals: Vec<f64>,
    pub residual_norm: f64,
    pub initial_residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}

/// JᵀJ (n×n) and Jᵀr.
fn normal_equations(jac: &[f64], r: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![0.0; n * n];
    let mut g = vec![0.0; n];
    for (row, &ri) in jac.chunks_exact(n).zip(r) {
        for j in 0..n {
            g[j] += row[j] * ri;
            for k in j..n {
                a[j * n + k] += row[j] * row[k];
            }
        }
    }
    for j in 0..n {
        for k in 0..j {
            a[j * n + k] = a[k * n + j];
        }
    }
    (a, g)
}

/// Solves the symmetric positive-definite system in place by Cholesky.
fn cholesky_solve(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) {
            return false;
        }
        let d = sqrt(d);
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    true
}

/// Inverse of JᵀJ restricted to identifiable parameters. Parameters with a
/// vanishing column, or the whole matrix if it is singular, get infinite
/// variance.
pub fn covariance_diagonal(jac: &[f64], n: usize) -> Vec<f64> {
    let m = jac.len() / n.max(1);
    let (a, _) = normal_equations(jac, &vec![0.0; m], n);
    let max_diag = (0..n).map(|j| a[j * n + j]).fold(0.0, f64::max);
    let keep: Vec<usize> = (0..n)
        .filter(|&j| a[j * n + j] > 1e-12 * max_diag && a[j * n + j] > 0.0)
        .collect();
    let k = keep.len();
    let mut out = vec![f64::INFINITY; n];
    for (col, &j) in keep.iter().enumerate() {
        let mut sub: Vec<f64> = keep
            .iter()
            .flat_map(|&r| keep.iter().map(move |&c| (r, c)))
            .map(|(r, c)| a[r * n + c])
            .collect();
        let mut e = vec![0.0; k];
        e[col] = 1.0;
        if !cholesky_solve(&mut sub, &mut e, k) {
            return vec![f64::INFINITY; n];
        }
        out[j] = e[col];
    }
    out
}

/// Runs bounded Levenberg–Marquardt from `start`.
pub fn solve<P: Residuals + ?Sized>(
    problem: &P,
    start: &[f64],
    bounds: &Bounds,
    options: &SolverOptions,
) -> Solution {
    let n = problem.num_params();
    let m = problem.num_residuals();
    let mut p = start.to_vec();
    bounds.clamp(&mut p);
    let mut r = vec![0.0; m];
    problem.residuals(&p, &mut r);
    let mut jac = vec![0.0; m * n];
    let mut cost = 0.5 * norm(&r).powi(2);
    let initial_residual_norm = norm(&r);

    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let mut p_try = vec![0.0; n];
    let mut r_try = vec![0.0; m];

    while iterations < options.max_iterations {
        iterations += 1;
        if cost == 0.0 {
            converged = true;
            break;
        }
        problem.jacobian(&p, &mut jac);
        let (a, g) = normal_equations(&jac, &r, n);

        // Free variables: not pinned at a bound by a gradient pushing outward.
        let free: Vec<usize> = (0..n)
            .filter(|&j| {
                let at_lo = p[j] <= bounds.lower[j] && g[j] > 0.0;
                let at_hi = p[j] >= bounds.upper[j] && g[j] < 0.0;
                !(at_lo || at_hi)
            })
            .collect();
        let rnorm = norm(&r);
        let cosine = free
            .iter()
            .map(|&j| {
                let cn = sqrt(a[j * n + j]);
                if cn == 0.0 {
                    0.0
                } else {
                    g[j].abs() / (cn * rnorm)
                }
            })
            .fold(0.0, f64::max);
        if cosine <= options.gradient_tolerance {
            converged = true;
            break;
        }

        let k = free.len();
        let max_diag = free.iter().map(|&j| a[j * n + j]).fold(0.0, f64::max);
        let mut accepted = false;
        while lambda < 1e16 {
            let mut sys: Vec<f64> = free
                .iter()
                .flat_map(|&r| free.iter().map(move |&c| (r, c)))
                .map(|(r, c)| a[r * n + c])
                .collect();
            for (i, &j) in free.iter().enumerate() {
                sys[i * k + i] += lambda * a[j * n + j].max(1e-12 * max_diag).max(1e-300);
            }
            let mut step: Vec<f64> = free.iter().map(|&j| -g[j]).collect();
            if !cholesky_solve(&mut sys, &mut step, k) {
                lambda *= 4.0;
                continue;
            }
            p_try.copy_from_slice(&p);
            for (i, &j) in free.iter().enumerate() {
                p_try[j] += step[i];
            }
            bounds.clamp(&mut p_try);
            problem.residuals(&p_try, &mut r_try);
            let cost_try = 0.5 * norm(&r_try).powi(2);
            if cost_try < cost {
                let dp = sqrt(p.iter().zip(&p_try).map(|(a, b)| (a - b) * (a - b)).sum());
                let reduction = (cost - cost_try) / cost;
                core::mem::swap(&mut p, &mut p_try);
                core::mem::swap(&mut r, &mut r_try);
                cost = cost_try;
                lambda = (lambda / 3.0).max(1e-15);
                accepted = true;
                if dp <= options.step_tolerance * (norm(&p) + options.step_tolerance)
                    || reduction <= options.cost_tolerance
                {
                    converged = true;
                }
                break;
            }
            lambda *= 4.0;
        }
        if converged {
            break;
        }
        if !accepted {
            // No downhill step at any damping: a minimum to working precision.
            converged = cosine <= 1e-6 || norm(&r) <= 1e-12 * (1.0 + initial_residual_norm);
            break;
        }
    }

    let residual_norm = norm(&r);
    Solution {
        params: p,
        residuals: r,
        residual_norm,
        initial_residual_norm,
        iterations,
        converged,
    }
}

/// Local solves from every start; picks the lowest residual norm, ties to
/// the earliest start.
pub fn multi_start<P: Residuals + ?Sized>(
    problem: &P,
    starts: &[Vec<f64>],
    bounds: &Bounds,
    options: &SolverOptions,
) -> (usize, Vec<Solution>) {
    let solutions: Vec<Solution> = starts
        .iter()
        .map(|s| solve(problem, s, bounds, options))
        .collect();
    let mut best = 0;
    for (i, s) in solutions.iter().enumerate().skip(1) {
        if s.residual_norm < solutions[best].residual_norm {
            best = i;
        }
    }
    (best, solutions)
}
