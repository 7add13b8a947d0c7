//! Turning spectra into clusterings.

mod kmeans;
mod metrics;

pub use kmeans::{kway_cluster_points, kway_embedding_cluster, Metric};
pub use metrics::{
    bipartition_cut_value, connectivity_profile, cut_metrics, ClusterProfile, ConnectivityProfile, CutCriterion,
    CutMetrics,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{graph_algebraic_connectivity, graph_fiedler};

/// Hard assignment of `n` nodes to clusters `0..k`, every cluster nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    k: usize,
    assignment: Vec<usize>,
}

impl Partition {
    /// Validate an assignment: `k` is one past the largest id and every id
    /// in `0..k` must be used.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let k = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; k];
        for &a in &assignment {
            used[a] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidPartition(format!("cluster {missing} is empty")));
        }
        Ok(Partition { k, assignment })
    }

    pub(crate) fn from_assignment_unchecked(assignment: Vec<usize>, k: usize) -> Self {
        Partition { k, assignment }
    }

    /// Relabel arbitrary cluster keys by order of first appearance.
    pub fn canonical<T: Eq + std::hash::Hash + Copy>(keys: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let assignment = keys
            .iter()
            .map(|key| {
                let next = ids.len();
                *ids.entry(*key).or_insert(next)
            })
            .collect();
        Partition { k: ids.len(), assignment }
    }

    /// Every node in its own cluster.
    pub fn identity(n: usize) -> Self {
        Partition { k: n, assignment: (0..n).collect() }
    }

    /// All nodes in one cluster.
    pub fn single(n: usize) -> Self {
        Partition { k: usize::from(n > 0), assignment: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Sorted member lists, indexed by cluster id.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &a) in self.assignment.iter().enumerate() {
            out[a].push(i);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &a in &self.assignment {
            out[a] += 1;
        }
        out
    }

    /// Same clusters, ids renumbered by first appearance.
    pub fn relabeled(&self) -> Partition {
        Partition::canonical(&self.assignment)
    }

    /// Compose with a partition of this partition's clusters.
    pub fn compose(&self, coarse: &Partition) -> Result<Partition> {
        if coarse.n() != self.k {
            return Err(Error::PartitionMismatch(format!(
                "coarse partition covers {} clusters, fine partition has {}",
                coarse.n(),
                self.k
            )));
        }
        Ok(Partition {
            k: coarse.k,
            assignment: self.assignment.iter().map(|&a| coarse.assignment[a]).collect(),
        })
    }

    pub(crate) fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} nodes, graph has {}",
                self.n(),
                g.n()
            )));
        }
        Ok(())
    }
}

/// Split by sign: cluster 0 holds entries above `-1e-12 * max|v|` (so
/// near-zero entries join the positive side), cluster 1 the rest.
pub fn sign_bipartition(g: &Graph, v: &[f64]) -> Result<Partition> {
    if v.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: v.len() });
    }
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::ConstantVector);
    }
    let cutoff = -1e-12 * scale;
    let assignment: Vec<usize> = v.iter().map(|&x| usize::from(x < cutoff)).collect();
    let negatives = assignment.iter().filter(|&&a| a == 1).count();
    if negatives == 0 || negatives == v.len() {
        return Err(Error::ConstantVector);
    }
    Ok(Partition { k: 2, assignment })
}

/// Recursive spectral bipartition into exactly `k` clusters.
///
/// Connected components form the first clusters. Then, until `k` clusters
/// exist, the splittable cluster with the smallest internal algebraic
/// connectivity is split by the sign of its own Fiedler vector (ties go to
/// the larger cluster, then the lower minimum node index).
pub fn recursive_bipartition(g: &Graph, k: usize) -> Result<Partition> {
    recursive_split(g, k, |sub, _| {
        let (_, f) = graph_fiedler(sub)?;
        let p = sign_bipartition(sub, &f)?;
        Ok(p.assignment().iter().map(|&a| a == 0).collect())
    })
}

struct Cluster {
    nodes: Vec<usize>,
    // (lambda_2 of the induced subgraph, induced subgraph is connected)
    priority: Option<(f64, bool)>,
}

/// Shared recursion policy. `split` receives a connected induced subgraph with
/// at least two nodes plus a running split counter, and returns a side mask
/// with both sides nonempty.
pub(crate) fn recursive_split<F>(g: &Graph, k: usize, mut split: F) -> Result<Partition>
where
    F: FnMut(&Graph, usize) -> Result<Vec<bool>>,
{
    let n = g.n();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, min: 1, max: n });
    }
    if k == 1 {
        return Ok(Partition::single(n));
    }
    let components = g.connected_components();
    if components.len() > k {
        return Err(Error::KOutOfRange { k, min: components.len(), max: n });
    }
    let mut clusters: Vec<Cluster> = components
        .into_iter()
        .map(|nodes| Cluster { nodes, priority: None })
        .collect();

    let mut splits = 0;
    while clusters.len() < k {
        for c in clusters.iter_mut().filter(|c| c.nodes.len() >= 2 && c.priority.is_none()) {
            let sub = g.induced_subgraph(&c.nodes)?;
            c.priority = Some(if sub.is_connected() {
                (graph_algebraic_connectivity(&sub)?, true)
            } else {
                (0.0, false)
            });
        }
        let chosen = clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| c.nodes.len() >= 2)
            .min_by(|(_, a), (_, b)| {
                let (pa, pb) = (a.priority.unwrap().0, b.priority.unwrap().0);
                pa.total_cmp(&pb)
                    .then(b.nodes.len().cmp(&a.nodes.len()))
                    .then(a.nodes[0].cmp(&b.nodes[0]))
            })
            .map(|(idx, _)| idx);
        let Some(idx) = chosen else {
            return Err(Error::NotEnoughSplittableClusters { clusters: clusters.len(), k });
        };
        let cluster = clusters.swap_remove(idx);
        let sub = g.induced_subgraph(&cluster.nodes)?;
        let mask = if cluster.priority.is_some_and(|(_, connected)| connected) {
            let mask = split(&sub, splits)?;
            if mask.len() != sub.n() || mask.iter().all(|&m| m) || mask.iter().all(|&m| !m) {
                return Err(Error::NotEnoughSplittableClusters { clusters: clusters.len() + 1, k });
            }
            mask
        } else {
            let (ids, _) = sub.component_ids();
            ids.iter().map(|&c| c == ids[0]).collect()
        };
        splits += 1;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (local, &node) in cluster.nodes.iter().enumerate() {
            if mask[local] {
                a.push(node);
            } else {
                b.push(node);
            }
        }
        clusters.push(Cluster { nodes: a, priority: None });
        clusters.push(Cluster { nodes: b, priority: None });
    }

    clusters.sort_by_key(|c| c.nodes[0]);
    let mut assignment = vec![0; n];
    for (id, c) in clusters.iter().enumerate() {
        for &node in &c.nodes {
            assignment[node] = id;
        }
    }
    Ok(Partition { k, assignment })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{planted_blocks, sbm_generate};
    use crate::spectral::graph_fiedler;

    /// Fraction of nodes on which `found` agrees with `truth` under the best
    /// relabeling, by enumerating permutations of the cluster ids.
    pub(crate) fn best_match_agreement(found: &Partition, truth: &Partition) -> f64 {
        assert_eq!(found.k(), truth.k());
        let k = found.k();
        let mut counts = vec![vec![0usize; k]; k];
        for (a, b) in found.assignment().iter().zip(truth.assignment()) {
            counts[*a][*b] += 1;
        }
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = 0;
        permute(&mut perm, 0, &mut |p| {
            best = best.max((0..k).map(|a| counts[a][p[a]]).sum());
        });
        best as f64 / found.n() as f64
    }

    fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
        if i == p.len() {
            f(p);
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            permute(p, i + 1, f);
            p.swap(i, j);
        }
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![0, 2, 2]).is_err());
        let p = Partition::new(vec![1, 0, 1]).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(p.relabeled().assignment(), &[0, 1, 0]);
        assert_eq!(p.clusters(), vec![vec![1], vec![0, 2]]);
        assert_eq!(Partition::canonical(&["x", "y", "x"]).assignment(), &[0, 1, 0]);
    }

    #[test]
    fn composition() {
        let fine = Partition::new(vec![0, 0, 1, 2, 2]).unwrap();
        let coarse = Partition::new(vec![0, 1, 1]).unwrap();
        assert_eq!(fine.compose(&coarse).unwrap().assignment(), &[0, 0, 1, 1, 1]);
        assert!(fine.compose(&Partition::new(vec![0, 1]).unwrap()).is_err());
    }

    #[test]
    fn sign_split_examples() {
        let g = bridged_triangles();
        let (_, f) = graph_fiedler(&g).unwrap();
        let p = sign_bipartition(&g, &f).unwrap();
        assert_eq!(p.relabeled().assignment(), &[0, 0, 0, 1, 1, 1]);

        let edge = Graph::with_default_labels(2, &[(0, 1, 1.0)]).unwrap();
        let (_, f) = graph_fiedler(&edge).unwrap();
        assert_eq!(sign_bipartition(&edge, &f).unwrap().assignment(), &[0, 1]);

        let c4 = cycle(4);
        let (_, f) = graph_fiedler(&c4).unwrap();
        assert_eq!(sign_bipartition(&c4, &f).unwrap().sizes(), vec![2, 2]);
    }

    #[test]
    fn sign_split_zero_entries_join_positive_side() {
        let g = path3();
        let p = sign_bipartition(&g, &[1.0, 0.0, -1.0]).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 1]);
        assert_eq!(sign_bipartition(&g, &[1.0, 1.0, 0.0]).unwrap_err(), Error::ConstantVector);
        assert_eq!(sign_bipartition(&g, &[0.0; 3]).unwrap_err(), Error::ConstantVector);
    }

    #[test]
    fn recursive_examples() {
        let g = bridged_triangles();
        assert_eq!(recursive_bipartition(&g, 1).unwrap(), Partition::single(6));
        assert_eq!(recursive_bipartition(&g, 2).unwrap().assignment(), &[0, 0, 0, 1, 1, 1]);
        let p = recursive_bipartition(&g, 6).unwrap();
        assert_eq!(p, Partition::identity(6));
        assert!(matches!(recursive_bipartition(&g, 7), Err(Error::KOutOfRange { .. })));
        assert!(matches!(recursive_bipartition(&g, 0), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn recursive_pre_splits_components() {
        let g = Graph::with_default_labels(6, &[(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0)]).unwrap();
        assert_eq!(recursive_bipartition(&g, 2).unwrap().assignment(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(recursive_bipartition(&g, 3).unwrap().k(), 3);
        let isolated = Graph::with_default_labels(3, &[]).unwrap();
        assert!(matches!(
            recursive_bipartition(&isolated, 2),
            Err(Error::KOutOfRange { k: 2, min: 3, max: 3 })
        ));
    }

    #[test]
    fn recursive_recovers_planted_blocks() {
        let g = sbm_generate(4, 8, 0.9, 0.02, 7).unwrap();
        let p = recursive_bipartition(&g, 4).unwrap();
        assert!(best_match_agreement(&p, &planted_blocks(4, 8)) >= 0.95);
    }
}
