use nalgebra::DMatrix;
use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

/// Symmetric weighted adjacency matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    entries: DMatrix<f64>,
}

impl AdjacencyMatrix {
    pub(crate) fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let mut entries = DMatrix::zeros(n, n);
        for e in g.edges() {
            entries[(e.u, e.v)] = e.weight;
            entries[(e.v, e.u)] = e.weight;
        }
        AdjacencyMatrix { entries }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// Diagonal of weighted degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMatrix {
    diagonal: Vec<f64>,
}

impl DegreeMatrix {
    pub(crate) fn from_graph(g: &Graph) -> Self {
        DegreeMatrix { diagonal: g.degrees() }
    }

    pub fn n(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianKind {
    /// `L = D - A`
    Combinatorial,
    /// `L = I - D^{-1/2} A D^{-1/2}`, zero row and column for isolated nodes.
    SymmetricNormalized,
}

/// Symmetric Laplacian stored in compressed sparse rows.
///
/// Every row stores its diagonal entry (possibly zero) plus one entry per
/// neighbor, with columns ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    n: usize,
    kind: LaplacianKind,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl LaplacianMatrix {
    pub(crate) fn from_graph(g: &Graph, kind: LaplacianKind) -> Self {
        let n = g.n();
        let degrees = g.degrees();
        let inv_sqrt: Vec<f64> = degrees
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
            .collect();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(n + 2 * g.edge_count());
        let mut vals = Vec::with_capacity(n + 2 * g.edge_count());
        row_ptr.push(0);
        for i in 0..n {
            let diag = match kind {
                LaplacianKind::Combinatorial => degrees[i],
                LaplacianKind::SymmetricNormalized => {
                    if degrees[i] > 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
            let mut placed = false;
            for &(j, w) in g.neighbors(i) {
                if !placed && j > i {
                    cols.push(i);
                    vals.push(diag);
                    placed = true;
                }
                cols.push(j);
                vals.push(match kind {
                    LaplacianKind::Combinatorial => -w,
                    LaplacianKind::SymmetricNormalized => -w * (inv_sqrt[i.min(j)] * inv_sqrt[i.max(j)]),
                });
            }
            if !placed {
                cols.push(i);
                vals.push(diag);
            }
            row_ptr.push(cols.len());
        }
        LaplacianMatrix { n, kind, row_ptr, cols, vals }
    }

    /// Wrap an externally supplied dense matrix, rejecting asymmetry beyond 1e-12.
    pub fn from_dense(m: &DMatrix<f64>, kind: LaplacianKind) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.ncols() });
        }
        for i in 0..n {
            for j in i + 1..n {
                let diff = (m[(i, j)] - m[(j, i)]).abs();
                if !(diff <= 1e-12) {
                    return Err(Error::NotSymmetric { i, j, diff });
                }
            }
        }
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || m[(i, j)] != 0.0 {
                    cols.push(j);
                    vals.push(m[(i, j)]);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(LaplacianMatrix { n, kind, row_ptr, cols, vals })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    /// Stored `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(pos) => self.vals[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
