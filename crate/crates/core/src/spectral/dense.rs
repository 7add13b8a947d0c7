use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::Spectrum;
use crate::error::{Error, Result};
use crate::graph::LaplacianKind;

pub(super) fn decompose(m: &DMatrix<f64>, kind: LaplacianKind, tol: f64) -> Result<Spectrum> {
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let diff = (m[(i, j)] - m[(j, i)]).abs();
            if !(diff <= 1e-12) {
                return Err(Error::NotSymmetric { i, j, diff });
            }
        }
    }
    if n == 0 {
        return Ok(Spectrum::new(Vec::new(), DMatrix::zeros(0, 0), kind));
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000 + 100 * n)
        .ok_or_else(|| Error::ConvergenceFailure(format!("dense solver, n = {n}")))?;
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure("non-finite eigenvalue".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    let vectors = canonicalize(&values, vectors, tol);
    Ok(Spectrum::new(values, vectors, kind))
}

/// Fix a deterministic basis for `vectors` (columns paired with ascending
/// `values`).
///
/// Runs of eigenvalues whose consecutive gaps are at most `tol` form one
/// eigenspace. Inside each, probe vectors `t_0, t_1, ...` are projected onto
/// the eigenspace and orthogonalized against the vectors already emitted.
/// The result depends only on the eigenspace, not on the basis the solver
/// happened to return. Every column then gets its first entry above 1e-12 in
/// magnitude made positive.
pub(super) fn canonicalize(values: &[f64], mut vectors: DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = vectors.nrows();
    let count = values.len();
    let mut start = 0;
    while start < count {
        let mut end = start + 1;
        while end < count && values[end] - values[end - 1] <= tol {
            end += 1;
        }
        let m = end - start;
        if m > 1 {
            let basis = vectors.columns(start, m).into_owned();
            let mut emitted: Vec<DVector<f64>> = Vec::with_capacity(m);
            let mut probe_index = 0u64;
            while emitted.len() < m {
                let t = probe(n, probe_index);
                probe_index += 1;
                let mut y = &basis * (basis.transpose() * &t);
                for _ in 0..2 {
                    for e in &emitted {
                        let c = e.dot(&y);
                        y.axpy(-c, e, 1.0);
                    }
                }
                let norm = y.norm();
                if norm > 1e-6 {
                    emitted.push(y / norm);
                } else if probe_index > 64 + m as u64 {
                    // probes keep missing the remaining directions; fall back to the solver's basis
                    for k in 0..m {
                        if emitted.len() == m {
                            break;
                        }
                        let mut y = basis.column(k).into_owned();
                        for e in &emitted {
                            let c = e.dot(&y);
                            y.axpy(-c, e, 1.0);
                        }
                        let norm = y.norm();
                        if norm > 1e-6 {
                            emitted.push(y / norm);
                        }
                    }
                }
            }
            for (k, v) in emitted.into_iter().enumerate() {
                vectors.set_column(start + k, &v);
            }
        }
        start = end;
    }
    for k in 0..count {
        let mut col = vectors.column_mut(k);
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
        if let Some(first) = col.iter().copied().find(|x| x.abs() > 1e-12) {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
    vectors
}

/// Unit-norm pseudo-random probe vector, a fixed function of `(n, index)`.
pub(super) fn probe(n: usize, index: u64) -> DVector<f64> {
    let v = DVector::from_iterator(
        n,
        (0..n as u64).map(|i| {
            let h = splitmix64(splitmix64(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)) ^ i);
            // 53 random bits mapped to [-1, 1)
            (h >> 11) as f64 / (1u64 << 52) as f64 - 1.0
        }),
    );
    let norm = v.norm();
    v / norm
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
