//! Block thick-restart Rayleigh-Ritz solver for the smallest eigenpairs of a
//! sparse symmetric matrix.
//!
//! The search space is grown Krylov-style (each new basis vector is the
//! operator applied to an earlier one, orthogonalized twice against the whole
//! basis). At a restart the best Ritz vectors are kept and the residuals of
//! unconverged pairs seed the next extension, which in exact arithmetic is
//! thick-restart Lanczos. The projected matrix is formed explicitly, so the
//! method does not depend on a tridiagonal recurrence staying accurate.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::dense::{canonicalize, probe};
use super::{degeneracy_tolerance, Spectrum};
use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;

#[derive(Debug, Clone)]
pub struct IterativeOptions {
    /// Residual bound `||L v - lambda v|| <= tolerance * max(1, |lambda|)`.
    pub tolerance: f64,
    pub max_restarts: usize,
    /// Search-space size; chosen from the requested count when `None`.
    pub basis_size: Option<usize>,
    /// Extra pairs computed beyond the request so that degenerate clusters at
    /// the boundary are resolved together.
    pub guard: usize,
}

impl Default for IterativeOptions {
    fn default() -> Self {
        IterativeOptions { tolerance: 1e-8, max_restarts: 2000, basis_size: None, guard: 2 }
    }
}

pub fn iterative_smallest_eigenpairs(l: &LaplacianMatrix, count: usize, opts: &IterativeOptions) -> Result<Spectrum> {
    let n = l.n();
    if count == 0 || n == 0 {
        return Ok(Spectrum::new(Vec::new(), DMatrix::zeros(n, 0), l.kind()));
    }
    let nev = (count + opts.guard).min(n);
    let block = nev.min(8);
    let m = opts
        .basis_size
        .unwrap_or_else(|| (3 * nev).max(nev + 8 * block).max(40))
        .max(nev + block)
        .min(n);
    if m >= n {
        // the search space would be the whole space anyway
        return Ok(super::eigendecompose(l)?.truncated(count));
    }

    let apply = |v: &DVector<f64>| DVector::from_vec(l.mul_vec(v.as_slice()));
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m);
    let mut images: Vec<DVector<f64>> = Vec::with_capacity(m);
    let mut frontier: VecDeque<DVector<f64>> = (0..block as u64).map(|j| probe(n, j)).collect();
    let mut next_probe = block as u64;

    for _restart in 0..=opts.max_restarts {
        while basis.len() < m {
            let candidate = match frontier.pop_front() {
                Some(c) => c,
                None => {
                    next_probe += 1;
                    probe(n, next_probe)
                }
            };
            let scale = candidate.norm();
            let mut w = candidate;
            for _ in 0..2 {
                for v in &basis {
                    let c = v.dot(&w);
                    w.axpy(-c, v, 1.0);
                }
            }
            let norm = w.norm();
            if !(norm > 1e-10 * scale.max(f64::MIN_POSITIVE)) {
                continue;
            }
            w /= norm;
            let aw = apply(&w);
            frontier.push_back(aw.clone());
            basis.push(w);
            images.push(aw);
        }

        let k = basis.len();
        let v = DMatrix::from_columns(&basis);
        let av = DMatrix::from_columns(&images);
        let h = v.transpose() * &av;
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, 10_000 + 100 * k)
            .ok_or_else(|| Error::ConvergenceFailure("projected eigenproblem".into()))?;
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

        let mut ritz_values = Vec::with_capacity(k);
        let mut ritz_vectors = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(nev);
        let mut converged = true;
        for (rank, &idx) in order.iter().enumerate() {
            let s = eig.eigenvectors.column(idx);
            let theta = eig.eigenvalues[idx];
            let y = &v * s;
            if rank < nev {
                let r = &av * s - &y * theta;
                if r.norm() > opts.tolerance * theta.abs().max(1.0) {
                    converged = false;
                    residuals.push(r);
                }
            }
            ritz_values.push(theta);
            ritz_vectors.push(y);
        }

        if converged {
            let values = ritz_values[..nev].to_vec();
            let vectors = canonicalize(&values, DMatrix::from_columns(&ritz_vectors[..nev]), degeneracy_tolerance(l));
            return Ok(Spectrum::new(values, vectors, l.kind()).truncated(count));
        }

        // thick restart: keep the leading Ritz vectors, re-orthonormalized
        let keep = (nev + (m - nev) / 2).min(m - block).max(nev);
        basis.clear();
        images.clear();
        for y in ritz_vectors.into_iter().take(keep) {
            let mut w = y;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&w);
                    w.axpy(-c, b, 1.0);
                }
            }
            let norm = w.norm();
            if norm > 1e-10 {
                w /= norm;
                images.push(apply(&w));
                basis.push(w);
            }
        }
        frontier.clear();
        frontier.extend(residuals.into_iter().take(block));
    }
    Err(Error::ConvergenceFailure(format!(
        "iterative solver did not reach residual {} within {} restarts",
        opts.tolerance, opts.max_restarts
    )))
}
