//! Multi-level cluster hierarchies.
//!
//! Level 0 clusters the base graph. Every later level clusters the previous
//! level's quotient graph, so clusters of clusters form progressively
//! coarser structures. Each level keeps its partition, its quotient graph,
//! the connectivity profile of the graph it partitioned, and the embedding
//! dimension its clustering used.

use std::fmt::Write;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, LaplacianKind};
use crate::nonlinear::{p_recursive_bipartition, PLaplacianParams};
use crate::partition::{
    connectivity_profile, kway_embedding_cluster, recursive_bipartition, ConnectivityProfile, Metric, Partition,
};
use crate::spectral::{smallest_eigenpairs, spectral_embedding};

#[derive(Debug, Clone, PartialEq)]
pub enum LevelMethod {
    RecursiveLinear,
    RecursiveP(PLaplacianParams),
    KwayEmbedding { dim: usize, metric: Metric },
}

impl LevelMethod {
    /// Eigenvector count used by the method (1 for sign-based splits).
    pub fn embedding_dim(&self) -> usize {
        match self {
            LevelMethod::KwayEmbedding { dim, .. } => *dim,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpec {
    pub k: usize,
    pub method: LevelMethod,
    pub seed: u64,
}

impl LevelSpec {
    pub fn new(k: usize, method: LevelMethod) -> Self {
        LevelSpec { k, method, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyLevel {
    pub level_index: usize,
    /// Partition of the previous level's nodes (the base graph at level 0).
    pub partition: Partition,
    pub quotient: Graph,
    pub profile: ConnectivityProfile,
    pub embedding_dim: usize,
    /// Weight inside clusters, dropped from the quotient.
    pub intra_cluster_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    pub base: Graph,
    pub levels: Vec<HierarchyLevel>,
}

fn cluster_level(g: &Graph, spec: &LevelSpec) -> Result<Partition> {
    match &spec.method {
        LevelMethod::RecursiveLinear => recursive_bipartition(g, spec.k),
        LevelMethod::RecursiveP(params) => p_recursive_bipartition(g, spec.k, params, spec.seed),
        LevelMethod::KwayEmbedding { dim, metric } => {
            let s = smallest_eigenpairs(&g.laplacian(LaplacianKind::Combinatorial), dim + 1)?;
            let e = spectral_embedding(&s, *dim)?;
            kway_embedding_cluster(&e, spec.k, *metric, spec.seed)
        }
    }
}

/// Build one level per spec. Cluster counts must satisfy
/// `k_0 <= n` and `k_{t+1} < k_t`.
pub fn build_hierarchy(g: &Graph, specs: &[LevelSpec]) -> Result<Hierarchy> {
    if specs.is_empty() {
        return Err(Error::SpecMonotonicityViolation("at least one level spec is required".into()));
    }
    let mut levels: Vec<HierarchyLevel> = Vec::with_capacity(specs.len());
    for (t, spec) in specs.iter().enumerate() {
        let current = levels.last().map_or(g, |l| &l.quotient);
        if spec.k < 1 || spec.k > current.n() {
            return Err(Error::SpecMonotonicityViolation(format!(
                "level {t}: k = {} but the level has {} nodes",
                spec.k,
                current.n()
            )));
        }
        if let Some(prev) = levels.last() {
            if spec.k >= prev.partition.k() {
                return Err(Error::SpecMonotonicityViolation(format!(
                    "level {t}: k = {} does not decrease from {}",
                    spec.k,
                    prev.partition.k()
                )));
            }
        }
        let partition = cluster_level(current, spec)?;
        let quotient = current.quotient(&partition)?;
        let profile = connectivity_profile(current, &partition)?;
        levels.push(HierarchyLevel {
            level_index: t,
            intra_cluster_weight: current.intra_cluster_weight(&partition),
            partition,
            quotient,
            profile,
            embedding_dim: spec.method.embedding_dim(),
        });
    }
    Ok(Hierarchy { base: g.clone(), levels })
}

impl Hierarchy {
    /// Partition of the base nodes after composing levels `0..=level`.
    pub fn flatten(&self, level: usize) -> Result<Partition> {
        if level >= self.levels.len() {
            return Err(Error::LevelOutOfRange { level, levels: self.levels.len() });
        }
        let mut p = self.levels[0].partition.clone();
        for l in &self.levels[1..=level] {
            p = p.compose(&l.partition)?;
        }
        Ok(p)
    }

    /// Quotient graphs in Graphviz DOT, one subgraph cluster per level.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hierarchy {\n");
        for level in &self.levels {
            let t = level.level_index;
            let _ = writeln!(out, "  subgraph cluster_level{t} {{");
            let _ = writeln!(out, "    label=\"level {t}\";");
            for (a, label) in level.quotient.labels().iter().enumerate() {
                let _ = writeln!(out, "    l{t}_{a} [label=\"{label}\"];");
            }
            for e in level.quotient.edges() {
                let _ = writeln!(out, "    l{t}_{} -- l{t}_{} [weight={:?}];", e.u, e.v, e.weight);
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        out
    }
}

/// Flattened partition of `h` through `level`.
pub fn flatten(h: &Hierarchy, level: usize) -> Result<Partition> {
    h.flatten(level)
}

struct LevelRecord<'a>(&'a HierarchyLevel);

impl Serialize for LevelRecord<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let l = self.0;
        let edges: Vec<(usize, usize, f64)> = l.quotient.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
        let mut s = serializer.serialize_struct("HierarchyLevel", 5)?;
        s.serialize_field("k", &l.partition.k())?;
        s.serialize_field("assignment", l.partition.assignment())?;
        s.serialize_field("quotient_edges", &edges)?;
        s.serialize_field("profile", &l.profile)?;
        s.serialize_field("embedding_dim", &l.embedding_dim)?;
        s.end()
    }
}

impl Serialize for Hierarchy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let levels: Vec<LevelRecord> = self.levels.iter().map(LevelRecord).collect();
        let mut s = serializer.serialize_struct("Hierarchy", 1)?;
        s.serialize_field("levels", &levels)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::bridged_triangles;
    use crate::graph::{nested_sbm_generate, Edge};
    use crate::partition::tests::best_match_agreement;

    fn nested_fixture() -> Graph {
        nested_sbm_generate(2, 2, 6, (0.9, 0.3, 0.02), 5).unwrap()
    }

    #[test]
    fn identity_single_level() {
        let g = bridged_triangles();
        let h = build_hierarchy(&g, &[LevelSpec::new(6, LevelMethod::RecursiveLinear)]).unwrap();
        assert_eq!(h.levels.len(), 1);
        assert_eq!(h.levels[0].partition, Partition::identity(6));
        assert_eq!(h.levels[0].quotient.edges(), g.edges());
        assert_eq!(h.flatten(0).unwrap(), Partition::identity(6));
    }

    #[test]
    fn bridged_triangles_level() {
        let g = bridged_triangles();
        let h = build_hierarchy(&g, &[LevelSpec::new(2, LevelMethod::RecursiveLinear)]).unwrap();
        let l = &h.levels[0];
        assert_eq!(l.partition.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(l.quotient.edges(), &[Edge { u: 0, v: 1, weight: 1.0 }]);
        assert_eq!(l.embedding_dim, 1);
        assert_eq!(l.intra_cluster_weight, 6.0);
    }

    #[test]
    fn nested_blocks_recovered_at_both_levels() {
        let g = nested_fixture();
        let specs = [LevelSpec::new(4, LevelMethod::RecursiveLinear), LevelSpec::new(2, LevelMethod::RecursiveLinear)];
        let h = build_hierarchy(&g, &specs).unwrap();
        let blocks = Partition::new((0..24).map(|i| i / 6).collect()).unwrap();
        let supers = Partition::new((0..24).map(|i| i / 12).collect()).unwrap();
        assert_eq!(best_match_agreement(&h.flatten(0).unwrap(), &blocks), 1.0);
        assert_eq!(best_match_agreement(&h.flatten(1).unwrap(), &supers), 1.0);
        assert_eq!(h.flatten(0).unwrap(), h.levels[0].partition);
    }

    #[test]
    fn kway_level_records_dimension() {
        let g = nested_fixture();
        let specs = [
            LevelSpec::new(4, LevelMethod::KwayEmbedding { dim: 3, metric: Metric::Manhattan }),
            LevelSpec::new(2, LevelMethod::RecursiveP(PLaplacianParams::with_p(1.5))),
        ];
        let h = build_hierarchy(&g, &specs).unwrap();
        assert_eq!(h.levels[0].embedding_dim, 3);
        assert_eq!(h.levels[1].embedding_dim, 1);
        assert_eq!(h.levels[1].quotient.n(), 2);
    }

    #[test]
    fn spec_errors() {
        let g = bridged_triangles();
        assert!(matches!(build_hierarchy(&g, &[]), Err(Error::SpecMonotonicityViolation(_))));
        let specs = [LevelSpec::new(2, LevelMethod::RecursiveLinear), LevelSpec::new(2, LevelMethod::RecursiveLinear)];
        assert!(matches!(build_hierarchy(&g, &specs), Err(Error::SpecMonotonicityViolation(_))));
        assert!(matches!(
            build_hierarchy(&g, &[LevelSpec::new(7, LevelMethod::RecursiveLinear)]),
            Err(Error::SpecMonotonicityViolation(_))
        ));
        let h = build_hierarchy(&g, &[LevelSpec::new(2, LevelMethod::RecursiveLinear)]).unwrap();
        assert_eq!(h.flatten(1).unwrap_err(), Error::LevelOutOfRange { level: 1, levels: 1 });
    }

    #[test]
    fn dot_output_lists_every_level() {
        let g = nested_fixture();
        let specs = [LevelSpec::new(4, LevelMethod::RecursiveLinear), LevelSpec::new(2, LevelMethod::RecursiveLinear)];
        let dot = build_hierarchy(&g, &specs).unwrap().to_dot();
        assert!(dot.starts_with("graph hierarchy {"));
        assert!(dot.contains("subgraph cluster_level0") && dot.contains("subgraph cluster_level1"));
        assert!(dot.contains("l1_0 -- l1_1"));
    }
}
