//! p-spectral bipartition by direct minimization of the p-Rayleigh functional
//!
//! ```text
//! R_p(f) = sum_{ij in E} w_ij |f_i - f_j|^p / min_c sum_i |f_i - c|^p
//! ```
//!
//! Minimization starts from the Fiedler vector (the exact minimizer at
//! p = 2) and walks p down geometrically to its target, running a
//! backtracking gradient descent at each stage. The final vector is cut at
//! the sweep threshold with the best cut value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{bipartition_cut_value, recursive_split, CutCriterion, Partition};
use crate::spectral::graph_fiedler;

#[derive(Debug, Clone, PartialEq)]
pub struct PLaplacianParams {
    /// Target exponent, `1 < p <= 2`.
    pub p: f64,
    /// Number of geometric steps from 2 down to `p`.
    pub continuation_steps: usize,
    /// Descent at one step stops once the relative objective decrease of an
    /// accepted iteration falls below this.
    pub inner_tolerance: f64,
    pub max_iterations: usize,
    /// Cut functional used to pick the sweep threshold.
    pub criterion: CutCriterion,
    /// Extra descents from seeded perturbations of the Fiedler vector.
    pub perturbed_restarts: usize,
}

impl Default for PLaplacianParams {
    fn default() -> Self {
        PLaplacianParams {
            p: 1.2,
            continuation_steps: 5,
            inner_tolerance: 1e-9,
            max_iterations: 500,
            criterion: CutCriterion::Cheeger,
            perturbed_restarts: 0,
        }
    }
}

impl PLaplacianParams {
    pub fn with_p(p: f64) -> Self {
        PLaplacianParams { p, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent(self.p)?;
        if self.continuation_steps < 1 {
            return Err(Error::InvalidParameter("continuation_steps must be at least 1".into()));
        }
        if !(self.inner_tolerance > 0.0 && self.inner_tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!("inner_tolerance = {}", self.inner_tolerance)));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        Ok(())
    }

    /// Exponents visited by the continuation, ending at `p`.
    pub fn schedule(&self) -> Vec<f64> {
        let steps = self.continuation_steps;
        (1..=steps)
            .map(|t| if t == steps { self.p } else { 2.0 * (self.p / 2.0).powf(t as f64 / steps as f64) })
            .collect()
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p <= 2.0 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(p))
    }
}

fn signed_power(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(e)
    }
}

/// `(Delta_p f)_i = sum_j w_ij |f_i - f_j|^{p-1} sign(f_i - f_j)`.
pub fn p_laplacian_apply(g: &Graph, f: &[f64], p: f64) -> Result<Vec<f64>> {
    check_exponent(p)?;
    if f.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: f.len() });
    }
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("vector has non-finite entries".into()));
    }
    let mut out = vec![0.0; g.n()];
    for e in g.edges() {
        let t = e.weight * signed_power(f[e.u] - f[e.v], p - 1.0);
        out[e.u] += t;
        out[e.v] -= t;
    }
    Ok(out)
}

/// Minimizer of `sum_i |f_i - c|^p` over `c`.
fn p_center(f: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        return f.iter().sum::<f64>() / f.len() as f64;
    }
    let slope = |c: f64| f.iter().map(|&x| signed_power(x - c, p - 1.0)).sum::<f64>();
    let (mut lo, mut hi) = f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

struct Evaluation {
    value: f64,
    center: f64,
    numerator: f64,
    denominator: f64,
}

fn evaluate(g: &Graph, f: &[f64], p: f64) -> Evaluation {
    let numerator: f64 = g.edges().iter().map(|e| e.weight * (f[e.u] - f[e.v]).abs().powf(p)).sum();
    let center = p_center(f, p);
    let denominator: f64 = f.iter().map(|&x| (x - center).abs().powf(p)).sum();
    let value = if denominator > 0.0 { numerator / denominator } else { f64::INFINITY };
    Evaluation { value, center, numerator, denominator }
}

/// The p-Rayleigh functional `R_p(f)`; infinite for constant `f`.
pub fn p_rayleigh_quotient(g: &Graph, f: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    if f.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: f.len() });
    }
    Ok(evaluate(g, f, p).value)
}

fn gradient(g: &Graph, f: &[f64], p: f64, ev: &Evaluation) -> Vec<f64> {
    let mut grad = vec![0.0; f.len()];
    for e in g.edges() {
        let t = p * e.weight * signed_power(f[e.u] - f[e.v], p - 1.0);
        grad[e.u] += t;
        grad[e.v] -= t;
    }
    // envelope theorem: the optimal shift contributes no extra term
    for (gi, &x) in grad.iter_mut().zip(f) {
        let dd = p * signed_power(x - ev.center, p - 1.0);
        *gi = (*gi - ev.value * dd) / ev.denominator;
    }
    debug_assert!(ev.numerator.is_finite());
    grad
}

/// Shift by the p-center and scale to unit Euclidean norm.
fn normalize(f: &mut [f64], p: f64) {
    let c = p_center(f, p);
    f.iter_mut().for_each(|x| *x -= c);
    let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        f.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Backtracking gradient descent at fixed `p`; returns the accepted objective
/// values, starting with the initial one.
fn descend(g: &Graph, f: &mut Vec<f64>, p: f64, params: &PLaplacianParams) -> Result<Vec<f64>> {
    normalize(f, p);
    let mut ev = evaluate(g, f, p);
    if !ev.value.is_finite() {
        return Err(Error::ConvergenceFailure(format!("p-Rayleigh objective is not finite at p = {p}")));
    }
    let mut trace = vec![ev.value];
    let mut step = 0.1;
    for _ in 0..params.max_iterations {
        let grad = gradient(g, f, p, &ev);
        let gnorm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(gnorm > 0.0) {
            break;
        }
        if !gnorm.is_finite() {
            return Err(Error::ConvergenceFailure(format!("non-finite gradient at p = {p}")));
        }
        let mut accepted = None;
        let mut trial = step;
        while trial > 1e-14 {
            let mut candidate: Vec<f64> = f.iter().zip(&grad).map(|(x, d)| x - trial * d / gnorm).collect();
            normalize(&mut candidate, p);
            let cand_ev = evaluate(g, &candidate, p);
            if cand_ev.value < ev.value && cand_ev.value <= ev.value - 1e-4 * trial * gnorm {
                accepted = Some((candidate, cand_ev));
                break;
            }
            trial *= 0.5;
        }
        let Some((candidate, cand_ev)) = accepted else { break };
        let relative = (ev.value - cand_ev.value) / ev.value;
        *f = candidate;
        ev = cand_ev;
        trace.push(ev.value);
        step = (trial * 2.0).min(1.0);
        if relative < params.inner_tolerance {
            break;
        }
    }
    Ok(trace)
}

/// Everything the p-spectral split computed.
#[derive(Debug, Clone)]
pub struct PSpectralOutcome {
    pub partition: Partition,
    /// Final vector (p-centered, unit Euclidean norm).
    pub vector: Vec<f64>,
    /// Cut value of the chosen sweep threshold under the configured criterion.
    pub cut_value: f64,
    /// Accepted objective values per continuation step.
    pub objective_trace: Vec<Vec<f64>>,
    /// `R_p` at the Fiedler vector, for the target `p`.
    pub initial_objective: f64,
    /// `R_p` at the returned vector.
    pub final_objective: f64,
}

/// Best sweep cut of `f`: nodes sorted by `(f_i, i)`, each of the `n - 1`
/// prefixes tried as one side. Ties keep the earliest prefix. Returns the
/// side mask (prefix = `true`) and the cut value.
pub fn sweep_threshold(g: &Graph, f: &[f64], criterion: CutCriterion) -> (Vec<bool>, f64) {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
    let degrees = g.degrees();
    let total_volume: f64 = degrees.iter().sum();
    let mut inside = vec![false; n];
    let (mut cut, mut volume) = (0.0, 0.0);
    let mut best = (f64::INFINITY, 0);
    for (pos, &u) in order.iter().enumerate().take(n - 1) {
        let into_set: f64 = g.neighbors(u).iter().filter(|(v, _)| inside[*v]).map(|(_, w)| w).sum();
        cut += degrees[u] - 2.0 * into_set;
        volume += degrees[u];
        inside[u] = true;
        let value = bipartition_cut_value(criterion, cut.max(0.0), (pos + 1, n - pos - 1), (volume, total_volume - volume));
        if value < best.0 {
            best = (value, pos);
        }
    }
    let mut mask = vec![false; n];
    for &u in &order[..=best.1] {
        mask[u] = true;
    }
    (mask, best.0)
}

fn run_continuation(g: &Graph, start: &[f64], params: &PLaplacianParams) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut f = start.to_vec();
    let mut traces = Vec::new();
    for p in params.schedule() {
        if p == 2.0 {
            // the Fiedler vector already minimizes R_2
            normalize(&mut f, p);
            traces.push(vec![evaluate(g, &f, p).value]);
            continue;
        }
        traces.push(descend(g, &mut f, p, params)?);
    }
    Ok((f, traces))
}

/// Full p-spectral bipartition with diagnostics.
pub fn p_spectral_detailed(g: &Graph, params: &PLaplacianParams, seed: u64) -> Result<PSpectralOutcome> {
    params.validate()?;
    if g.n() < 2 {
        return Err(Error::TooFewNodes { n: g.n(), needed: 2 });
    }
    let (_, fiedler) = graph_fiedler(g)?;
    let initial_objective = evaluate(g, &fiedler, params.p).value;

    let (mut best_f, mut best_trace) = run_continuation(g, &fiedler, params)?;
    if params.continuation_steps > 1 && evaluate(g, &best_f, params.p).value > initial_objective {
        // the intermediate exponents led somewhere worse for the target p
        let mut f = fiedler.clone();
        let trace = descend(g, &mut f, params.p, params)?;
        best_f = f;
        best_trace = vec![trace];
    }
    let (mut best_mask, mut best_cut) = sweep_threshold(g, &best_f, params.criterion);
    let mut best_objective = evaluate(g, &best_f, params.p).value;

    for restart in 1..=params.perturbed_restarts as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart);
        let start: Vec<f64> = fiedler.iter().map(|x| x + 0.1 * rng.gen_range(-1.0..1.0) / (g.n() as f64).sqrt()).collect();
        let (f, trace) = run_continuation(g, &start, params)?;
        let objective = evaluate(g, &f, params.p).value;
        let (mask, cut) = sweep_threshold(g, &f, params.criterion);
        if cut < best_cut && objective <= initial_objective {
            (best_f, best_trace, best_mask, best_cut, best_objective) = (f, trace, mask, cut, objective);
        }
    }

    Ok(PSpectralOutcome {
        partition: Partition::canonical(&best_mask),
        vector: best_f,
        cut_value: best_cut,
        objective_trace: best_trace,
        initial_objective,
        final_objective: best_objective,
    })
}

/// p-spectral bipartition; see [`p_spectral_detailed`].
pub fn p_spectral_bipartition(g: &Graph, params: &PLaplacianParams, seed: u64) -> Result<Partition> {
    p_spectral_detailed(g, params, seed).map(|o| o.partition)
}

/// Recursive bipartition with the same cluster-selection policy as
/// [`crate::partition::recursive_bipartition`], each split made by
/// [`p_spectral_bipartition`] (split `t` uses `seed + t`).
pub fn p_recursive_bipartition(g: &Graph, k: usize, params: &PLaplacianParams, seed: u64) -> Result<Partition> {
    params.validate()?;
    recursive_split(g, k, |sub, t| {
        let p = p_spectral_bipartition(sub, params, seed.wrapping_add(t as u64))?;
        Ok(p.assignment().iter().map(|&a| a == 0).collect())
    })
}
