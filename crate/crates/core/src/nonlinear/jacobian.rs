use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Interdependencies between state variables at an operating point: the
/// Jacobian entries plus a mask of which entries are linear (constant).
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSystem {
    couplings: DMatrix<f64>,
    linear_mask: DMatrix<bool>,
}

impl CouplingSystem {
    pub fn new(couplings: DMatrix<f64>, linear_mask: DMatrix<bool>) -> Result<Self> {
        let n = couplings.nrows();
        if couplings.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: couplings.ncols() });
        }
        if linear_mask.nrows() != n || linear_mask.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: linear_mask.nrows().max(linear_mask.ncols()) });
        }
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(CouplingSystem { couplings, linear_mask })
    }

    pub fn n(&self) -> usize {
        self.couplings.nrows()
    }

    pub fn couplings(&self) -> &DMatrix<f64> {
        &self.couplings
    }

    pub fn linear_mask(&self) -> &DMatrix<bool> {
        &self.linear_mask
    }
}

/// Unit-weight graph on the state variables (labels `x0, x1, ...`) with an
/// edge `{i, j}` when either direction is marked linear and the larger of
/// `|J_ij|`, `|J_ji|` exceeds `threshold`. Also returns the node set of the
/// largest connected component (ties go to the lowest minimum node).
pub fn jacobian_graph(sys: &CouplingSystem, threshold: f64) -> Result<(Graph, Vec<usize>)> {
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidParameter(format!("threshold = {threshold}")));
    }
    let n = sys.n();
    let (c, mask) = (&sys.couplings, &sys.linear_mask);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let linear = mask[(i, j)] || mask[(j, i)];
            if linear && c[(i, j)].abs().max(c[(j, i)].abs()) > threshold {
                edges.push((i, j, 1.0));
            }
        }
    }
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let g = Graph::from_edges(&labels, &edges)?;
    let mut largest: Vec<usize> = Vec::new();
    for comp in g.connected_components() {
        if comp.len() > largest.len() {
            largest = comp;
        }
    }
    Ok((g, largest))
}
