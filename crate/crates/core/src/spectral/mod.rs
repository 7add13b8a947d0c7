//! Laplacian eigen-analysis.
//!
//! [`eigendecompose`] returns the full spectrum of a Laplacian, ascending,
//! with a deterministic eigenvector basis: vectors inside a (numerically)
//! degenerate eigenspace are fixed by projecting a fixed sequence of probe
//! vectors onto that eigenspace, and every vector's first significant entry is
//! made positive. Partial spectra for large graphs come from
//! [`smallest_eigenpairs`], which switches to an iterative solver above
//! [`DENSE_LIMIT`] nodes.

mod dense;
mod iterative;

pub use iterative::{iterative_smallest_eigenpairs, IterativeOptions};

use nalgebra::DMatrix;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, LaplacianKind, LaplacianMatrix};

/// Largest node count handled by the dense solver in [`smallest_eigenpairs`].
pub const DENSE_LIMIT: usize = 2048;

/// Eigenvalues at or below this are treated as zero in connectivity tests.
pub const ZERO_EIGENVALUE: f64 = 1e-9;

/// Eigenpairs of a Laplacian, eigenvalues ascending.
///
/// Holds all `n` pairs when produced by [`eigendecompose`], or the smallest
/// few when produced by the iterative solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    // column k pairs with eigenvalues[k]
    eigenvectors: DMatrix<f64>,
    kind: LaplacianKind,
}

impl Spectrum {
    pub(crate) fn new(eigenvalues: Vec<f64>, eigenvectors: DMatrix<f64>, kind: LaplacianKind) -> Self {
        debug_assert_eq!(eigenvalues.len(), eigenvectors.ncols());
        Spectrum { eigenvalues, eigenvectors, kind }
    }

    /// Node count.
    pub fn n(&self) -> usize {
        self.eigenvectors.nrows()
    }

    /// Number of eigenpairs held.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    /// Eigenvectors as matrix columns.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    /// Keep only the `count` smallest pairs.
    pub fn truncated(&self, count: usize) -> Spectrum {
        let count = count.min(self.len());
        Spectrum {
            eigenvalues: self.eigenvalues[..count].to_vec(),
            eigenvectors: self.eigenvectors.columns(0, count).into_owned(),
            kind: self.kind,
        }
    }

    /// Number of eigenvalues at or below [`ZERO_EIGENVALUE`].
    pub fn zero_count(&self) -> usize {
        self.eigenvalues.iter().filter(|&&v| v <= ZERO_EIGENVALUE).count()
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let vectors: Vec<Vec<f64>> = (0..self.len()).map(|k| self.eigenvector(k)).collect();
        let mut s = serializer.serialize_struct("Spectrum", 2)?;
        s.serialize_field("eigenvalues", &self.eigenvalues)?;
        s.serialize_field("eigenvectors", &vectors)?;
        s.end()
    }
}

/// Node coordinates from the non-constant eigenvectors `v_2 .. v_{dim+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    coordinates: DMatrix<f64>,
}

impl Embedding {
    pub fn from_coordinates(coordinates: DMatrix<f64>) -> Self {
        Embedding { coordinates }
    }

    pub fn n(&self) -> usize {
        self.coordinates.nrows()
    }

    pub fn dim(&self) -> usize {
        self.coordinates.ncols()
    }

    /// `n x dim` matrix, one row per node.
    pub fn coordinates(&self) -> &DMatrix<f64> {
        &self.coordinates
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        self.coordinates.row(i).iter().copied().collect()
    }
}

/// Full eigendecomposition with the dense symmetric solver.
pub fn eigendecompose(l: &LaplacianMatrix) -> Result<Spectrum> {
    dense::decompose(&l.to_dense(), l.kind(), degeneracy_tolerance(l))
}

/// The `count` smallest eigenpairs: dense up to [`DENSE_LIMIT`] nodes,
/// iterative above.
pub fn smallest_eigenpairs(l: &LaplacianMatrix, count: usize) -> Result<Spectrum> {
    if l.n() <= DENSE_LIMIT {
        Ok(eigendecompose(l)?.truncated(count))
    } else {
        iterative_smallest_eigenpairs(l, count, &IterativeOptions::default())
    }
}

pub(crate) fn degeneracy_tolerance(l: &LaplacianMatrix) -> f64 {
    1e-11 * l.inf_norm().max(1.0)
}

/// `x^T L x / x^T x`.
pub fn rayleigh_quotient(l: &LaplacianMatrix, x: &[f64]) -> Result<f64> {
    if x.len() != l.n() {
        return Err(Error::DimensionMismatch { expected: l.n(), got: x.len() });
    }
    let xx: f64 = x.iter().map(|v| v * v).sum();
    if xx == 0.0 {
        return Err(Error::ZeroVector);
    }
    let lx = l.mul_vec(x);
    Ok(x.iter().zip(&lx).map(|(a, b)| a * b).sum::<f64>() / xx)
}

/// Edge-sum form `sum_{ij in E} w_ij (x_i - x_j)^2 / x^T x`, equal to the
/// combinatorial Rayleigh quotient.
pub fn rayleigh_quotient_edges(g: &Graph, x: &[f64]) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: x.len() });
    }
    let xx: f64 = x.iter().map(|v| v * v).sum();
    if xx == 0.0 {
        return Err(Error::ZeroVector);
    }
    let energy: f64 = g.edges().iter().map(|e| e.weight * (x[e.u] - x[e.v]).powi(2)).sum();
    Ok(energy / xx)
}

/// Second-smallest eigenvalue.
pub fn algebraic_connectivity(s: &Spectrum) -> Result<f64> {
    if s.n() < 2 || s.len() < 2 {
        return Err(Error::TooFewNodes { n: s.n(), needed: 2 });
    }
    Ok(s.eigenvalue(1))
}

/// Unit eigenvector paired with the second-smallest eigenvalue.
pub fn fiedler_vector(s: &Spectrum) -> Result<Vec<f64>> {
    let lambda2 = algebraic_connectivity(s)?;
    if lambda2 <= ZERO_EIGENVALUE {
        return Err(Error::DisconnectedGraph(lambda2));
    }
    Ok(s.eigenvector(1))
}

/// Embed every node with eigenvectors `2 ..= dim + 1`.
pub fn spectral_embedding(s: &Spectrum, dim: usize) -> Result<Embedding> {
    let max = s.n().saturating_sub(1).min(s.len().saturating_sub(1));
    if dim < 1 || dim > max {
        return Err(Error::DimensionOutOfRange { dim, max });
    }
    Ok(Embedding { coordinates: s.eigenvectors().columns(1, dim).into_owned() })
}

/// `(lambda_2, fiedler vector)` of a graph's combinatorial Laplacian.
pub fn graph_fiedler(g: &Graph) -> Result<(f64, Vec<f64>)> {
    let s = smallest_eigenpairs(&g.laplacian(LaplacianKind::Combinatorial), 2)?;
    let v = fiedler_vector(&s)?;
    Ok((s.eigenvalue(1), v))
}

/// Algebraic connectivity of a graph's combinatorial Laplacian; 0 for a single node.
pub fn graph_algebraic_connectivity(g: &Graph) -> Result<f64> {
    if g.n() < 2 {
        return Ok(0.0);
    }
    let s = smallest_eigenpairs(&g.laplacian(LaplacianKind::Combinatorial), 2)?;
    algebraic_connectivity(&s)
}
