//! Structure-to-function connectivity model.
//!
//! A functional connectivity matrix is predicted from a structural graph by
//! exponential decay over the Laplacian eigenmodes:
//!
//! ```text
//! F = scale * sum_k exp(-beta * lambda_k) u_k u_k^T + offset * I
//!   = scale * exp(-beta * L) + offset * I
//! ```
//!
//! [`fit_fc`] recovers `(beta, scale, offset)` from an observed matrix with a
//! coarse grid on `beta`, closed-form least squares for the linear pair, and
//! golden-section refinement.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, LaplacianKind};
use crate::spectral::{eigendecompose, Spectrum};

const SYMMETRY_TOLERANCE: f64 = 1e-10;
const BETA_MAX: f64 = 10.0;
const BETA_STEP: f64 = 0.1;
const GOLDEN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, DeriveSerialize)]
pub struct FcModel {
    pub beta: f64,
    pub scale: f64,
    pub offset: f64,
}

impl FcModel {
    pub fn new(beta: f64, scale: f64, offset: f64) -> Result<Self> {
        let m = FcModel { beta, scale, offset };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {}", self.beta)));
        }
        if !self.scale.is_finite() || !self.offset.is_finite() {
            return Err(Error::InvalidParameter("scale and offset must be finite".into()));
        }
        Ok(())
    }
}

/// Symmetric matrix of functional couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct FcMatrix {
    entries: DMatrix<f64>,
}

impl FcMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), got: entries.ncols() });
        }
        let n = entries.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let diff = (entries[(i, j)] - entries[(j, i)]).abs();
                if diff > SYMMETRY_TOLERANCE || diff.is_nan() {
                    return Err(Error::NotSymmetric { i, j, diff });
                }
            }
        }
        Ok(FcMatrix { entries })
    }

    pub fn identity(n: usize) -> Self {
        FcMatrix { entries: DMatrix::identity(n, n) }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.entries.clone()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn frobenius_distance(&self, other: &FcMatrix) -> Result<f64> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: other.n() });
        }
        Ok((&self.entries - &other.entries).norm())
    }
}

impl Serialize for FcMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.n()))?;
        for i in 0..self.n() {
            let row: Vec<f64> = self.entries.row(i).iter().copied().collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

fn model_spectrum(g: &Graph, kind: LaplacianKind) -> Result<Spectrum> {
    eigendecompose(&g.laplacian(kind))
}

fn assemble(s: &Spectrum, m: &FcModel) -> FcMatrix {
    let u = s.eigenvectors();
    let decay = DVector::from_iterator(s.len(), s.eigenvalues().iter().map(|&l| m.scale * (-m.beta * l).exp()));
    let mut f = u * DMatrix::from_diagonal(&decay) * u.transpose();
    for i in 0..f.nrows() {
        f[(i, i)] += m.offset;
    }
    let f = (&f + f.transpose()) * 0.5;
    FcMatrix { entries: f }
}

/// Predict functional connectivity from the normalized Laplacian of `g`.
pub fn predict_fc(g: &Graph, m: &FcModel) -> Result<FcMatrix> {
    predict_fc_with(g, m, LaplacianKind::SymmetricNormalized)
}

pub fn predict_fc_with(g: &Graph, m: &FcModel, kind: LaplacianKind) -> Result<FcMatrix> {
    m.validate()?;
    Ok(assemble(&model_spectrum(g, kind)?, m))
}

/// Observed matrix expressed in the structural eigenbasis. Only its diagonal
/// depends on the model; the off-diagonal mass is a constant floor.
struct FitProblem {
    eigenvalues: Vec<f64>,
    diagonal: Vec<f64>,
    off_diagonal_sq: f64,
}

impl FitProblem {
    fn new(s: &Spectrum, observed: &FcMatrix) -> Self {
        let u = s.eigenvectors();
        let rotated = u.transpose() * observed.entries() * u;
        let n = rotated.nrows();
        let mut off_diagonal_sq = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    off_diagonal_sq += rotated[(i, j)] * rotated[(i, j)];
                }
            }
        }
        FitProblem {
            eigenvalues: s.eigenvalues().to_vec(),
            diagonal: (0..n).map(|k| rotated[(k, k)]).collect(),
            off_diagonal_sq,
        }
    }

    /// Least-squares `(scale, offset)` at fixed `beta` and the squared error.
    fn solve(&self, beta: f64) -> (f64, f64, f64) {
        let n = self.eigenvalues.len() as f64;
        let x: Vec<f64> = self.eigenvalues.iter().map(|&l| (-beta * l).exp()).collect();
        let (mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for (&xk, &yk) in x.iter().zip(&self.diagonal) {
            sx += xk;
            sxx += xk * xk;
            sy += yk;
            sxy += xk * yk;
        }
        let det = n * sxx - sx * sx;
        let (scale, offset) = if det > 1e-12 * n * sxx {
            ((n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det)
        } else if sxx > 0.0 {
            // flat decay profile: scale and offset are not separable
            (sxy / sxx, 0.0)
        } else {
            (0.0, sy / n)
        };
        let residual: f64 = x
            .iter()
            .zip(&self.diagonal)
            .map(|(&xk, &yk)| {
                let r = scale * xk + offset - yk;
                r * r
            })
            .sum();
        (scale, offset, residual + self.off_diagonal_sq)
    }
}

fn golden_section(problem: &FitProblem, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let mut fc = problem.solve(c).2;
    let mut fd = problem.solve(d).2;
    while hi - lo > GOLDEN_TOLERANCE {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = problem.solve(c).2;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = problem.solve(d).2;
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

/// Fit a model to `observed` using the normalized Laplacian of `g`.
/// Returns the model and its Frobenius error.
pub fn fit_fc(g: &Graph, observed: &FcMatrix) -> Result<(FcModel, f64)> {
    fit_fc_with(g, observed, LaplacianKind::SymmetricNormalized)
}

pub fn fit_fc_with(g: &Graph, observed: &FcMatrix, kind: LaplacianKind) -> Result<(FcModel, f64)> {
    if observed.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: observed.n() });
    }
    let s = model_spectrum(g, kind)?;
    let problem = FitProblem::new(&s, observed);
    let steps = (BETA_MAX / BETA_STEP).round() as usize;
    let grid: Vec<(f64, f64)> = (0..=steps)
        .into_par_iter()
        .map(|t| {
            let beta = t as f64 * BETA_STEP;
            (beta, problem.solve(beta).2)
        })
        .collect();
    let mut best = grid[0];
    for &(beta, err) in &grid[1..] {
        if err < best.1 {
            best = (beta, err);
        }
    }
    let refined = golden_section(&problem, (best.0 - BETA_STEP).max(0.0), (best.0 + BETA_STEP).min(BETA_MAX));
    let beta = if problem.solve(refined).2 < best.1 { refined } else { best.0 };
    let (scale, offset, _) = problem.solve(beta);
    let model = FcModel { beta, scale, offset };
    let error = assemble(&s, &model).frobenius_distance(observed)?;
    Ok((model, error))
}

/// Pearson correlation of the ascending eigenvalue sequences of `a` and `b`.
pub fn spectra_similarity(a: &FcMatrix, b: &FcMatrix) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    if a.n() < 3 {
        return Err(Error::TooFewNodes { n: a.n(), needed: 3 });
    }
    pearson(&a.eigenvalues(), &b.eigenvalues())
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    for (ss, v) in [(sxx, x), (syy, y)] {
        let scale = v.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        if (ss / n).sqrt() <= 1e-12 * scale {
            return Err(Error::DegenerateVariance);
        }
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Summary of a fit, as written by the command-line tool.
#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct FitReport {
    pub beta: f64,
    pub scale: f64,
    pub offset: f64,
    pub frobenius_error: f64,
    /// `None` when either spectrum has zero variance.
    pub spectra_similarity: Option<f64>,
}

pub fn fit_report(g: &Graph, observed: &FcMatrix) -> Result<FitReport> {
    fit_report_with(g, observed, LaplacianKind::SymmetricNormalized)
}

pub fn fit_report_with(g: &Graph, observed: &FcMatrix, kind: LaplacianKind) -> Result<FitReport> {
    let (model, frobenius_error) = fit_fc_with(g, observed, kind)?;
    let predicted = predict_fc_with(g, &model, kind)?;
    let spectra_similarity = match spectra_similarity(&predicted, observed) {
        Ok(r) => Some(r),
        Err(Error::DegenerateVariance) | Err(Error::TooFewNodes { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(FitReport { beta: model.beta, scale: model.scale, offset: model.offset, frobenius_error, spectra_similarity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{bridged_triangles, path3};
    use crate::graph::sbm_generate;

    /// exp(-beta L) by scaling and squaring a truncated power series.
    fn expm_series(l: &DMatrix<f64>, beta: f64, terms: usize) -> DMatrix<f64> {
        let n = l.nrows();
        let a = l * (-beta);
        let norm = a.abs().row_sum().max();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let a = a / 2f64.powi(squarings as i32);
        let mut term = DMatrix::identity(n, n);
        let mut sum = DMatrix::identity(n, n);
        for k in 1..terms {
            term = &term * &a / k as f64;
            sum += &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    fn sbm30() -> Graph {
        sbm_generate(3, 10, 0.7, 0.1, 11).unwrap()
    }

    #[test]
    fn zero_decay_gives_identity() {
        let g = sbm30();
        let f = predict_fc(&g, &FcModel::new(0.0, 1.0, 0.0).unwrap()).unwrap();
        assert!((f.entries() - DMatrix::identity(30, 30)).amax() < 1e-12);
    }

    #[test]
    fn zero_scale_gives_offset_identity() {
        let g = bridged_triangles();
        let f = predict_fc(&g, &FcModel::new(2.0, 0.0, 0.4).unwrap()).unwrap();
        assert_eq!(f.entries(), &(DMatrix::identity(6, 6) * 0.4));
    }

    #[test]
    fn eigen_sum_matches_power_series() {
        let g = path3();
        let f = predict_fc(&g, &FcModel::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        let lsym = g.laplacian(LaplacianKind::SymmetricNormalized).to_dense();
        let oracle = expm_series(&lsym, 1.0, 20);
        assert!((f.entries() - oracle).amax() < 1e-9);
    }

    #[test]
    fn combinatorial_kind_matches_power_series() {
        let g = bridged_triangles();
        let m = FcModel::new(0.7, 1.5, 0.2).unwrap();
        let f = predict_fc_with(&g, &m, LaplacianKind::Combinatorial).unwrap();
        let l = g.laplacian(LaplacianKind::Combinatorial).to_dense();
        let oracle = expm_series(&l, 0.7, 30) * 1.5 + DMatrix::identity(6, 6) * 0.2;
        assert!((f.entries() - oracle).amax() < 1e-9);
    }

    #[test]
    fn self_consistent_fit_recovers_parameters() {
        let g = sbm30();
        let truth = FcModel::new(1.3, 2.0, 0.1).unwrap();
        let observed = predict_fc(&g, &truth).unwrap();
        let (m, err) = fit_fc(&g, &observed).unwrap();
        assert!(err < 1e-8, "fit error {err}");
        assert!((m.beta - 1.3).abs() < 1e-3);
        assert!((m.scale - 2.0).abs() < 1e-3);
        assert!((m.offset - 0.1).abs() < 1e-3);
    }

    #[test]
    fn identity_is_fit_exactly() {
        let g = sbm30();
        let (_, err) = fit_fc(&g, &FcMatrix::identity(30)).unwrap();
        assert!(err < 1e-8);
    }

    #[test]
    fn noisy_fit_stays_close() {
        use rand::{Rng, SeedableRng};
        let g = sbm30();
        let observed = predict_fc(&g, &FcModel::new(1.3, 2.0, 0.1).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut noisy = observed.entries().clone();
        for i in 0..30 {
            for j in i..30 {
                let e = rng.gen_range(-1e-3..1e-3);
                noisy[(i, j)] += e;
                if i != j {
                    noisy[(j, i)] += e;
                }
            }
        }
        let (m, err) = fit_fc(&g, &FcMatrix::new(noisy).unwrap()).unwrap();
        assert!(err <= 30.0 * 1e-3);
        assert!((m.beta - 1.3).abs() < 0.05, "beta {}", m.beta);
    }

    #[test]
    fn fit_dimension_mismatch() {
        let g = path3();
        assert_eq!(
            fit_fc(&g, &FcMatrix::identity(4)).unwrap_err(),
            Error::DimensionMismatch { expected: 3, got: 4 }
        );
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(FcMatrix::new(m), Err(Error::NotSymmetric { i: 0, j: 1, .. })));
    }

    #[test]
    fn similarity_examples() {
        let g = sbm30();
        let a = predict_fc(&g, &FcModel::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert!((spectra_similarity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let b = FcMatrix::new(a.entries() * 2.0 + DMatrix::identity(30, 30) * 3.0).unwrap();
        assert!((spectra_similarity(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        let d1 = FcMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]))).unwrap();
        let d2 = FcMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 2.0, 1.0]))).unwrap();
        assert!((spectra_similarity(&d1, &d2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn similarity_errors() {
        let i3 = FcMatrix::identity(3);
        let d = FcMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]))).unwrap();
        assert_eq!(spectra_similarity(&i3, &d).unwrap_err(), Error::DegenerateVariance);
        assert!(matches!(spectra_similarity(&FcMatrix::identity(2), &FcMatrix::identity(2)), Err(Error::TooFewNodes { .. })));
        assert!(matches!(spectra_similarity(&i3, &FcMatrix::identity(4)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn negative_beta_rejected() {
        assert!(matches!(FcModel::new(-0.1, 1.0, 0.0), Err(Error::InvalidParameter(_))));
    }
}
