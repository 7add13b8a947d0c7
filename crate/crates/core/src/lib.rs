//! Hierarchical spectral clustering of weighted connectivity graphs.
//!
//! The pipeline decomposes a graph into small, internally dense clusters
//! using Laplacian eigen-analysis, recombines the clusters through quotient
//! graphs into a multi-level hierarchy, and relates a structural graph to a
//! functional connectivity matrix through its Laplacian eigenmodes.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`graph`] | weighted undirected graphs, adjacency/degree/Laplacian matrices, quotients, SBM fixtures |
//! | [`spectral`] | eigendecomposition, Rayleigh quotients, Fiedler vectors, embeddings |
//! | [`partition`] | sign/recursive bipartition, k-way embedding clustering, cut metrics |
//! | [`nonlinear`] | graph p-Laplacian, p-spectral bipartition, Jacobian coupling graphs |
//! | [`hierarchy`] | multi-level cluster hierarchies over quotient graphs |
//! | [`structfunc`] | structural Laplacian to functional connectivity model |

pub mod error;
pub mod graph;
pub mod hierarchy;
pub mod nonlinear;
pub mod partition;
pub mod spectral;
pub mod structfunc;

pub use error::{Error, Result};
pub use graph::{Graph, LaplacianKind, LaplacianMatrix};
pub use hierarchy::{Hierarchy, HierarchyLevel, LevelMethod, LevelSpec};
pub use nonlinear::{CouplingSystem, CutCriterion, PLaplacianParams};
pub use partition::{ConnectivityProfile, CutMetrics, Metric, Partition};
pub use spectral::{Embedding, Spectrum};
pub use structfunc::{FcMatrix, FcModel, FitReport};
