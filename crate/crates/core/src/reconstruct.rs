//! Joint recovery of the noise photon-number distribution and the channel
//! transmittance from photocount frequencies measured at several detector
//! efficiencies.
//!
//! The estimate minimizes
//!
//! ```text
//! J(b, tau) = sum_{i,k} (P_i(k) - Pi(k; b, tau * eta_i))^2 + lambda * S(b)
//! ```
//!
//! over `b` on the probability simplex and `tau` in a closed interval, where
//! `S` is the sum of squared second differences of `b`.
//!
//! For fixed `tau` the model is linear in `b`, so `J` is a convex quadratic in
//! `b`. The solver therefore searches `tau` by golden section on the profile
//! `min_b J(b, tau)` (after a coarse grid scan that brackets the minimum), and
//! solves each `b` subproblem with a primal active-set method on the simplex,
//! followed by projected-gradient steps that certify stationarity.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    binomial_thinning, mix_source_noise, thinning_kernel, NoiseDistribution, Pmf,
    PhotocountDistribution,
};
use crate::error::{Error, Result};
use crate::sim::EmpiricalDataset;

pub const DEFAULT_LAMBDA: f64 = 1e-7;

/// Stopping rules and search resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    #[serde(default = "default_grad_tol")]
    pub grad_tol: f64,
    #[serde(default = "default_tau_tol")]
    pub tau_tol: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// Points of the coarse `tau` scan that brackets the golden-section search.
    #[serde(default = "default_tau_grid")]
    pub tau_grid: usize,
}

fn default_grad_tol() -> f64 {
    1e-9
}
fn default_tau_tol() -> f64 {
    1e-6
}
fn default_max_iterations() -> usize {
    100_000
}
fn default_tau_grid() -> usize {
    41
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            grad_tol: default_grad_tol(),
            tau_tol: default_tau_tol(),
            max_iterations: default_max_iterations(),
            tau_grid: default_tau_grid(),
        }
    }
}

/// Photocount frequencies at one efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub eta: f64,
    pub freqs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionProblem {
    observations: Vec<Observation>,
    pub xi: f64,
    pub cutoff: usize,
    pub lambda: f64,
    pub tau_range: (f64, f64),
    pub settings: SolverSettings,
}

impl ReconstructionProblem {
    /// Problem over the frequencies of `dataset`, with default `lambda`,
    /// `tau_range = [0, 1]` and default solver settings.
    pub fn from_dataset(dataset: &EmpiricalDataset, xi: f64, cutoff: usize) -> Result<Self> {
        let observations = dataset
            .efficiencies()
            .into_iter()
            .zip(dataset.frequency_table())
            .map(|(eta, freqs)| Observation { eta, freqs })
            .collect();
        Self::new(observations, xi, cutoff)
    }

    /// Problem over exact (noiseless) photocount laws.
    pub fn from_exact(
        etas: &[f64],
        laws: &[PhotocountDistribution],
        xi: f64,
        cutoff: usize,
    ) -> Result<Self> {
        if etas.len() != laws.len() {
            return Err(Error::invalid(
                "observations",
                "one photocount law per efficiency is required",
            ));
        }
        let observations = etas
            .iter()
            .zip(laws)
            .map(|(&eta, pi)| Observation {
                eta,
                freqs: pi.probs().to_vec(),
            })
            .collect();
        Self::new(observations, xi, cutoff)
    }

    pub fn new(mut observations: Vec<Observation>, xi: f64, cutoff: usize) -> Result<Self> {
        let len = observations.iter().map(|o| o.freqs.len()).max().unwrap_or(1);
        for o in &mut observations {
            o.freqs.resize(len, 0.0);
        }
        let prob = Self {
            observations,
            xi,
            cutoff,
            lambda: DEFAULT_LAMBDA,
            tau_range: (0.0, 1.0),
            settings: SolverSettings::default(),
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tau_range(mut self, lo: f64, hi: f64) -> Result<Self> {
        self.tau_range = (lo, hi);
        self.validate()?;
        Ok(self)
    }

    pub fn with_settings(mut self, settings: SolverSettings) -> Result<Self> {
        self.settings = settings;
        self.validate()?;
        Ok(self)
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    /// Largest photocount number present in the data.
    pub fn kmax(&self) -> usize {
        self.observations[0].freqs.len() - 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(Error::invalid("xi", format!("{} is outside [0, 1]", self.xi)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid(
                "lambda",
                format!("{} must be finite and >= 0", self.lambda),
            ));
        }
        let (lo, hi) = self.tau_range;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::invalid(
                "tau_range",
                format!("[{lo}, {hi}] is not a nonempty interval within [0, 1]"),
            ));
        }
        if self.xi == 0.0 && lo < hi {
            return Err(Error::invalid(
                "xi",
                "with no heralded photons the transmittance cannot be separated from the noise; \
                 give xi > 0 or fix tau_range to a single value",
            ));
        }
        let mut etas: Vec<f64> = Vec::with_capacity(self.observations.len());
        for (i, o) in self.observations.iter().enumerate() {
            if !(o.eta > 0.0 && o.eta <= 1.0) {
                return Err(Error::invalid(
                    "eta",
                    format!("setting {i}: {} is outside (0, 1]", o.eta),
                ));
            }
            if o.freqs.iter().any(|&f| !f.is_finite() || f < 0.0) {
                return Err(Error::invalid(
                    "frequencies",
                    format!("setting {i} has a negative or non-finite entry"),
                ));
            }
            if !etas.contains(&o.eta) {
                etas.push(o.eta);
            }
        }
        if etas.len() < 2 {
            return Err(Error::invalid(
                "eta",
                "at least two distinct efficiencies are required",
            ));
        }
        let s = &self.settings;
        if !(s.grad_tol > 0.0 && s.tau_tol > 0.0) || s.max_iterations == 0 || s.tau_grid < 3 {
            return Err(Error::invalid(
                "tolerances",
                "tolerances must be positive, max_iterations >= 1 and tau_grid >= 3",
            ));
        }
        Ok(())
    }

    fn check_tau(&self, tau: f64) -> Result<()> {
        let (lo, hi) = self.tau_range;
        if !(lo..=hi).contains(&tau) {
            return Err(Error::invalid(
                "tau",
                format!("{tau} is outside tau_range [{lo}, {hi}]"),
            ));
        }
        Ok(())
    }

    fn check_cutoff(&self, b: &NoiseDistribution) -> Result<()> {
        if b.cutoff() != self.cutoff {
            return Err(Error::invalid(
                "noise distribution",
                format!("cutoff {} differs from problem cutoff {}", b.cutoff(), self.cutoff),
            ));
        }
        Ok(())
    }

    /// Model photocount laws for `(b, tau)`, truncated or padded to the data length.
    fn model(&self, b: &NoiseDistribution, tau: f64) -> Result<Vec<Vec<f64>>> {
        let mixed = mix_source_noise(b, self.xi)?;
        let len = self.kmax() + 1;
        self.observations
            .iter()
            .map(|o| {
                let mut pi = binomial_thinning(&mixed, tau * o.eta)?.into_probs();
                pi.resize(len, 0.0);
                Ok(pi)
            })
            .collect()
    }
}

/// Sum of squared second differences, `sum_{m=1}^{M-1} (b(m+1) - 2 b(m) + b(m-1))^2`.
pub fn smoothness_penalty(b: &[f64]) -> f64 {
    b.windows(3)
        .map(|w| {
            let d = w[2] - 2.0 * w[1] + w[0];
            d * d
        })
        .sum()
}

fn smoothness_gradient(b: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; b.len()];
    for (m, w) in b.windows(3).enumerate() {
        let d = 2.0 * (w[2] - 2.0 * w[1] + w[0]);
        g[m] += d;
        g[m + 1] -= 2.0 * d;
        g[m + 2] += d;
    }
    g
}

/// Data misfit plus `lambda` times the smoothness penalty.
pub fn objective(b: &NoiseDistribution, tau: f64, prob: &ReconstructionProblem) -> Result<f64> {
    prob.check_tau(tau)?;
    prob.check_cutoff(b)?;
    Ok(misfit(b, tau, prob)? + prob.lambda * smoothness_penalty(b.probs()))
}

/// Per setting, measured minus modelled photocount probabilities.
pub fn residuals(
    b: &NoiseDistribution,
    tau: f64,
    prob: &ReconstructionProblem,
) -> Result<Vec<Vec<f64>>> {
    prob.check_tau(tau)?;
    prob.check_cutoff(b)?;
    let model = prob.model(b, tau)?;
    Ok(prob
        .observations
        .iter()
        .zip(&model)
        .map(|(o, pi)| o.freqs.iter().zip(pi).map(|(p, q)| p - q).collect())
        .collect())
}

fn misfit(b: &NoiseDistribution, tau: f64, prob: &ReconstructionProblem) -> Result<f64> {
    let model = prob.model(b, tau)?;
    Ok(prob
        .observations
        .iter()
        .zip(&model)
        .flat_map(|(o, pi)| o.freqs.iter().zip(pi).map(|(p, q)| (p - q) * (p - q)))
        .sum())
}

/// Partial derivatives of [`objective`] with respect to each `b(m)`.
pub fn gradient_b(
    b: &NoiseDistribution,
    tau: f64,
    prob: &ReconstructionProblem,
) -> Result<Vec<f64>> {
    prob.check_tau(tau)?;
    prob.check_cutoff(b)?;
    let model = prob.model(b, tau)?;
    let n = b.probs().len();
    let xi = prob.xi;
    let mut grad = vec![0.0; n];
    for (o, pi) in prob.observations.iter().zip(&model) {
        // adjoint of thinning, then of mixing
        let kernel = thinning_kernel(tau * o.eta, n + 1);
        let g_mixed: Vec<f64> = kernel
            .iter()
            .map(|row| {
                row.iter()
                    .zip(pi.iter().zip(&o.freqs))
                    .map(|(r, (q, p))| 2.0 * (q - p) * r)
                    .sum()
            })
            .collect();
        for m in 0..n {
            grad[m] += (1.0 - xi) * g_mixed[m] + xi * g_mixed[m + 1];
        }
    }
    if prob.lambda > 0.0 {
        for (g, s) in grad.iter_mut().zip(smoothness_gradient(b.probs())) {
            *g += prob.lambda * s;
        }
    }
    Ok(grad)
}

/// Euclidean projection onto `{x : x >= 0, sum x = 1}` by the sorted-threshold rule.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    let x: Vec<f64> = v.iter().map(|&vi| (vi - theta).max(0.0)).collect();
    // Pull the sum back onto 1 exactly enough for downstream checks.
    let s: f64 = x.iter().sum();
    if (s - 1.0).abs() > 1e-15 && s > 0.0 {
        x.into_iter().map(|xi| xi / s).collect()
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub noise: NoiseDistribution,
    pub tau: f64,
    pub objective: f64,
    pub misfit: f64,
    pub penalty: f64,
    pub iterations: usize,
    pub converged: bool,
    pub projected_gradient_norm: f64,
    /// Final bracket width of the `tau` search.
    pub tau_interval: f64,
    /// `P_i(k) - Pi(k)` per setting and photocount number.
    pub residuals: Vec<Vec<f64>>,
    /// Objective of every accepted iterate, in order.
    pub objective_trace: Vec<f64>,
}

/// Linear model `A(tau) b` stacked over settings, plus `sqrt(lambda) D` rows.
struct LinearModel {
    a: DMatrix<f64>,
    y: DVector<f64>,
    // Reduced system `r x ~ qty` with the same minimizers as `a x ~ y`.
    r: DMatrix<f64>,
    qty: DVector<f64>,
}

impl LinearModel {
    fn new(prob: &ReconstructionProblem, tau: f64) -> Self {
        let n = prob.cutoff + 1;
        let klen = prob.kmax() + 1;
        let data_rows = prob.observations.len() * klen;
        let reg_rows = if prob.lambda > 0.0 && n >= 3 { n - 2 } else { 0 };
        let rows = data_rows + reg_rows;
        let mut a = DMatrix::<f64>::zeros(rows, n);
        let mut y = DVector::<f64>::zeros(rows);
        let xi = prob.xi;
        for (i, o) in prob.observations.iter().enumerate() {
            let kernel = thinning_kernel(tau * o.eta, n + 1);
            for k in 0..klen {
                let row = i * klen + k;
                y[row] = o.freqs[k];
                for m in 0..n {
                    let lower = kernel[m].get(k).copied().unwrap_or(0.0);
                    let upper = kernel[m + 1].get(k).copied().unwrap_or(0.0);
                    a[(row, m)] = (1.0 - xi) * lower + xi * upper;
                }
            }
        }
        if reg_rows > 0 {
            let s = prob.lambda.sqrt();
            for j in 0..reg_rows {
                let row = data_rows + j;
                a[(row, j)] = s;
                a[(row, j + 1)] = -2.0 * s;
                a[(row, j + 2)] = s;
            }
        }
        let (r, qty) = if rows >= n {
            let qr = a.clone().qr();
            let qty = qr.q().transpose() * &y;
            (qr.r(), qty)
        } else {
            (a.clone(), y.clone())
        };
        Self { a, y, r, qty }
    }

    fn value(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.a.nrows() {
            let mut r = -self.y[i];
            for (j, &xj) in x.iter().enumerate() {
                r += self.a[(i, j)] * xj;
            }
            total += r * r;
        }
        total
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let xv = DVector::from_column_slice(x);
        let res = &self.a * xv - &self.y;
        (self.a.transpose() * res * 2.0).as_slice().to_vec()
    }

    /// Minimizer of the reduced least-squares problem over the coordinates in
    /// `free`, subject to their sum being one. `pivot` is eliminated through
    /// the sum constraint.
    fn equality_solution(&self, free: &[usize], pivot: usize) -> Vec<f64> {
        let n = self.r.ncols();
        let mut z = vec![0.0; n];
        let others: Vec<usize> = free.iter().copied().filter(|&j| j != pivot).collect();
        if others.is_empty() {
            z[pivot] = 1.0;
            return z;
        }
        let rows = self.r.nrows();
        let mut c = DMatrix::<f64>::zeros(rows, others.len());
        let mut rhs = self.qty.clone();
        for i in 0..rows {
            rhs[i] -= self.r[(i, pivot)];
            for (col, &j) in others.iter().enumerate() {
                c[(i, col)] = self.r[(i, j)] - self.r[(i, pivot)];
            }
        }
        let svd = c.svd(true, true);
        let smax = svd.singular_values.max();
        let eps = smax * f64::EPSILON * rows.max(others.len()) as f64;
        let coef = match svd.solve(&rhs, eps) {
            Ok(c) => c,
            Err(_) => DVector::zeros(others.len()),
        };
        let mut sum = 0.0;
        for (col, &j) in others.iter().enumerate() {
            z[j] = coef[col];
            sum += coef[col];
        }
        z[pivot] = 1.0 - sum;
        z
    }

    /// Primal active-set method for `min |A x - y|^2` on the simplex, started
    /// from the feasible point `start`. Every iterate stays feasible.
    fn solve_simplex(&self, start: &[f64], budget: &mut usize) -> Vec<f64> {
        let n = start.len();
        let mut x = start.to_vec();
        let mut free: Vec<bool> = x.iter().map(|&v| v > 0.0).collect();
        let limit = 10 * n + 50;
        for _ in 0..limit {
            if *budget == 0 {
                break;
            }
            *budget -= 1;
            let idx: Vec<usize> = (0..n).filter(|&j| free[j]).collect();
            let pivot = *idx
                .iter()
                .max_by(|&&a, &&b| x[a].total_cmp(&x[b]).then(b.cmp(&a)))
                .expect("free set is never empty");
            let z = self.equality_solution(&idx, pivot);
            if idx.iter().all(|&j| z[j] > 0.0) {
                x = z;
                let g = self.gradient(&x);
                let nu = idx.iter().map(|&j| g[j]).sum::<f64>() / idx.len() as f64;
                let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
                let entering = (0..n)
                    .filter(|&j| !free[j])
                    .map(|j| (j, g[j] - nu))
                    .filter(|&(_, d)| d < -1e-12 * scale)
                    .min_by(|a, b| a.1.total_cmp(&b.1));
                match entering {
                    Some((j, _)) => free[j] = true,
                    None => break,
                }
            } else {
                // Move toward z until the first free coordinate reaches zero.
                let mut alpha = 1.0f64;
                for &j in &idx {
                    if z[j] <= 0.0 {
                        alpha = alpha.min(x[j] / (x[j] - z[j]));
                    }
                }
                for &j in &idx {
                    x[j] += alpha * (z[j] - x[j]);
                    if z[j] <= 0.0 && x[j] <= 1e-15 {
                        x[j] = 0.0;
                        free[j] = false;
                    }
                }
                let s: f64 = x.iter().sum();
                x.iter_mut().for_each(|v| *v /= s);
                if !free.iter().any(|&f| f) {
                    let j = (0..n).max_by(|&a, &b| x[a].total_cmp(&x[b])).unwrap();
                    free[j] = true;
                }
            }
        }
        x
    }
}

/// Projected-gradient stationarity measure `|x - P(x - g)|`.
fn projected_gradient_norm(x: &[f64], g: &[f64]) -> f64 {
    let shifted: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
    let p = project_simplex(&shifted);
    x.iter()
        .zip(&p)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

struct Profile<'a> {
    prob: &'a ReconstructionProblem,
    budget: usize,
    best: Option<(f64, f64, Vec<f64>)>,
    trace: Vec<f64>,
}

impl Profile<'_> {
    fn eval(&mut self, tau: f64, warm: &[f64]) -> (f64, Vec<f64>) {
        let model = LinearModel::new(self.prob, tau);
        let x = model.solve_simplex(warm, &mut self.budget);
        let f = model.value(&x);
        let improves = match &self.best {
            None => true,
            Some((fb, _, _)) => f < *fb,
        };
        if improves {
            self.best = Some((f, tau, x.clone()));
            self.trace.push(f);
        }
        (f, x)
    }

    fn warm(&self, n: usize) -> Vec<f64> {
        match &self.best {
            Some((_, _, x)) => x.clone(),
            None => vec![1.0 / n as f64; n],
        }
    }
}

/// Minimizes the regularized least-squares objective jointly over the noise
/// distribution and the channel transmittance.
///
/// Non-convergence is reported through `converged`, not as an error.
pub fn solve(prob: &ReconstructionProblem) -> Result<ReconstructionResult> {
    prob.validate()?;
    let n = prob.cutoff + 1;
    let settings = prob.settings;
    let (lo, hi) = prob.tau_range;
    let mut profile = Profile {
        prob,
        budget: settings.max_iterations,
        best: None,
        trace: Vec::new(),
    };

    let mut tau_interval = 0.0;
    if lo == hi {
        profile.eval(lo, &vec![1.0 / n as f64; n]);
    } else {
        let steps = settings.tau_grid - 1;
        let grid: Vec<f64> = (0..=steps)
            .map(|j| lo + (hi - lo) * j as f64 / steps as f64)
            .collect();
        let mut values = Vec::with_capacity(grid.len());
        let mut warm = vec![1.0 / n as f64; n];
        for &t in &grid {
            let (f, x) = profile.eval(t, &warm);
            values.push(f);
            warm = x;
        }
        let j = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(j, _)| j)
            .unwrap();
        let mut a = grid[j.saturating_sub(1)];
        let mut b = grid[(j + 1).min(steps)];

        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let mut x1 = b - INV_PHI * (b - a);
        let mut x2 = a + INV_PHI * (b - a);
        let (mut f1, _) = profile.eval(x1, &profile.warm(n));
        let (mut f2, _) = profile.eval(x2, &profile.warm(n));
        while b - a > settings.tau_tol && profile.budget > 0 {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - INV_PHI * (b - a);
                f1 = profile.eval(x1, &profile.warm(n)).0;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + INV_PHI * (b - a);
                f2 = profile.eval(x2, &profile.warm(n)).0;
            }
        }
        tau_interval = b - a;
    }

    let (_, tau, mut x) = profile.best.take().expect("at least one profile evaluation");
    let mut trace = profile.trace;
    let mut budget = profile.budget;

    // Projected-gradient refinement at the selected tau, with backtracking so
    // that every accepted step decreases the objective.
    let model = LinearModel::new(prob, tau);
    let mut f = model.value(&x);
    let mut g = model.gradient(&x);
    let mut pg = projected_gradient_norm(&x, &g);
    let lipschitz = 2.0 * model.a.iter().map(|v| v * v).sum::<f64>();
    let mut step = if lipschitz > 0.0 { 1.0 / lipschitz } else { 1.0 };
    while pg > settings.grad_tol && budget > 0 {
        budget -= 1;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - step * b).collect();
            let cand = project_simplex(&trial);
            let fc = model.value(&cand);
            let dx: Vec<f64> = cand.iter().zip(&x).map(|(a, b)| a - b).collect();
            let lin: f64 = dx.iter().zip(&g).map(|(d, gi)| d * gi).sum();
            let quad: f64 = dx.iter().map(|d| d * d).sum::<f64>() / (2.0 * step);
            if fc <= f + lin + quad && fc <= f {
                accepted = fc < f;
                x = cand;
                f = fc;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        trace.push(f);
        step *= 2.0;
        g = model.gradient(&x);
        pg = projected_gradient_norm(&x, &g);
    }

    let noise = NoiseDistribution::from_simplex_point(x);
    let misfit_value = misfit(&noise, tau, prob)?;
    let penalty = smoothness_penalty(noise.probs());
    let residuals = residuals(&noise, tau, prob)?;
    let iterations = settings.max_iterations - budget;
    let converged = budget > 0 && pg <= settings.grad_tol && tau_interval <= settings.tau_tol;
    Ok(ReconstructionResult {
        objective: misfit_value + prob.lambda * penalty,
        misfit: misfit_value,
        penalty,
        tau,
        noise,
        iterations,
        converged,
        projected_gradient_norm: pg,
        tau_interval,
        residuals,
        objective_trace: trace,
    })
}

/// One point of an L-curve: data misfit against smoothness penalty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LCurvePoint {
    pub lambda: f64,
    pub misfit: f64,
    pub penalty: f64,
    pub tau: f64,
    pub converged: bool,
}

/// Solves `prob` once per `lambda`; results follow the order of `lambdas`.
pub fn sweep_lambda(prob: &ReconstructionProblem, lambdas: &[f64]) -> Result<Vec<LCurvePoint>> {
    lambdas
        .par_iter()
        .map(|&lambda| {
            let p = prob.clone().with_lambda(lambda)?;
            let r = solve(&p)?;
            Ok(LCurvePoint {
                lambda,
                misfit: r.misfit,
                penalty: r.penalty,
                tau: r.tau,
                converged: r.converged,
            })
        })
        .collect()
}
