//! Nonlinear extensions: the graph p-Laplacian, p-spectral bipartition and
//! coupling graphs extracted from an operating-point Jacobian.

mod jacobian;
mod pspectral;

pub use jacobian::{jacobian_graph, CouplingSystem};
pub use pspectral::{
    p_laplacian_apply, p_rayleigh_quotient, p_recursive_bipartition, p_spectral_bipartition, p_spectral_detailed,
    sweep_threshold, PLaplacianParams, PSpectralOutcome,
};

pub use crate::partition::CutCriterion;
