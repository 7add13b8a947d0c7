//! Weighted undirected graphs and their matrix representations.
//!
//! A [`Graph`] is immutable once built. Edges are stored canonically as
//! `(min(i, j), max(i, j), w)` sorted lexicographically, so two graphs built
//! from the same edge set compare equal and serialize identically regardless
//! of input order.

mod generate;
mod matrix;

pub use generate::{nested_sbm_generate, planted_blocks, sbm_generate};
pub use matrix::{AdjacencyMatrix, DegreeMatrix, LaplacianKind, LaplacianMatrix};

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    // neighbor lists sorted by neighbor index
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Graph {
    /// Build a graph from node labels and `(i, j, weight)` triples.
    ///
    /// Rejects self-loops, repeated unordered pairs, weights that are not
    /// strictly positive and finite, out-of-range indices, and repeated
    /// labels. The first offending edge in input order is reported.
    pub fn from_edges<S: AsRef<str>>(labels: &[S], edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen_labels = HashSet::with_capacity(n);
        for l in labels {
            if !seen_labels.insert(l.as_ref()) {
                return Err(Error::DuplicateLabel(l.as_ref().to_string()));
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut canon = Vec::with_capacity(edges.len());
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { i, j, n });
            }
            if i == j {
                return Err(Error::SelfLoop { i });
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonpositiveWeight { i, j, weight: w });
            }
            let (u, v) = (i.min(j), i.max(j));
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge { i: u, j: v });
            }
            canon.push(Edge { u, v, weight: w });
        }
        canon.sort_by_key(|e| (e.u, e.v));
        Ok(Self::from_canonical(
            labels.iter().map(|s| s.as_ref().to_string()).collect(),
            canon,
        ))
    }

    fn from_canonical(labels: Vec<String>, edges: Vec<Edge>) -> Self {
        let mut neighbors = vec![Vec::new(); labels.len()];
        // edges are sorted by (u, v), which leaves every neighbor list sorted
        for e in &edges {
            neighbors[e.u].push((e.v, e.weight));
        }
        for e in &edges {
            neighbors[e.v].push((e.u, e.weight));
        }
        for list in &mut neighbors {
            list.sort_by_key(|&(j, _)| j);
        }
        Graph { labels, edges, neighbors }
    }

    /// Graph with `n` nodes labelled `v0..v{n-1}` and the given edges.
    pub fn with_default_labels(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        Self::from_edges(&labels, edges)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    /// Weight of edge `{i, j}`, if present.
    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        self.neighbors[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .ok()
            .map(|pos| self.neighbors[i][pos].1)
    }

    /// Weighted degree `d(i)`, summed in neighbor-index order.
    pub fn degree(&self, i: usize) -> f64 {
        self.neighbors[i].iter().map(|&(_, w)| w).sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn adjacency_matrix(&self) -> AdjacencyMatrix {
        AdjacencyMatrix::from_graph(self)
    }

    pub fn degree_matrix(&self) -> DegreeMatrix {
        DegreeMatrix::from_graph(self)
    }

    pub fn laplacian(&self, kind: LaplacianKind) -> LaplacianMatrix {
        LaplacianMatrix::from_graph(self, kind)
    }

    /// Subgraph induced by `nodes`. Nodes are re-indexed in ascending order
    /// of their original index; labels carry over.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        if nodes.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut sorted = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let n = self.n();
        let mut remap = vec![usize::MAX; n];
        for (new, &old) in sorted.iter().enumerate() {
            if old >= n {
                return Err(Error::IndexOutOfRange { i: old, j: old, n });
            }
            remap[old] = new;
        }
        let labels = sorted.iter().map(|&i| self.labels[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| remap[e.u] != usize::MAX && remap[e.v] != usize::MAX)
            .map(|e| Edge { u: remap[e.u], v: remap[e.v], weight: e.weight })
            .collect();
        // remap is monotone, so the filtered edge list is still sorted
        Ok(Graph::from_canonical(labels, edges))
    }

    /// Cluster-level graph: one node per cluster, edges weighted by the total
    /// weight crossing between clusters. Nodes are labelled `c0, c1, ...`.
    pub fn quotient(&self, partition: &Partition) -> Result<Graph> {
        let labels = (0..partition.k()).map(|a| format!("c{a}")).collect();
        self.quotient_with_labels(partition, labels)
    }

    pub fn quotient_with_labels(&self, partition: &Partition, labels: Vec<String>) -> Result<Graph> {
        if partition.n() != self.n() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} nodes, graph has {}",
                partition.n(),
                self.n()
            )));
        }
        if labels.len() != partition.k() {
            return Err(Error::PartitionMismatch(format!(
                "{} labels for {} clusters",
                labels.len(),
                partition.k()
            )));
        }
        let assign = partition.assignment();
        let mut crossing: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for e in &self.edges {
            let (a, b) = (assign[e.u], assign[e.v]);
            if a != b {
                *crossing.entry((a.min(b), a.max(b))).or_insert(0.0) += e.weight;
            }
        }
        let edges = crossing
            .into_iter()
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        Ok(Graph::from_canonical(labels, edges))
    }

    /// Total weight of edges whose endpoints share a cluster.
    pub fn intra_cluster_weight(&self, partition: &Partition) -> f64 {
        let assign = partition.assignment();
        self.edges
            .iter()
            .filter(|e| assign[e.u] == assign[e.v])
            .map(|e| e.weight)
            .sum()
    }

    /// Component id per node; components are numbered by their lowest node.
    pub fn component_ids(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.neighbors[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Node sets of the connected components, each sorted, ordered by lowest node.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let (comp, count) = self.component_ids();
        let mut out = vec![Vec::new(); count];
        for (i, c) in comp.into_iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.component_ids().1 == 1
    }
}

/// Build a graph from labels and edges. See [`Graph::from_edges`].
pub fn graph_from_edges<S: AsRef<str>>(labels: &[S], edges: &[(usize, usize, f64)]) -> Result<Graph> {
    Graph::from_edges(labels, edges)
}

pub fn quotient_graph(g: &Graph, partition: &Partition) -> Result<Graph> {
    g.quotient(partition)
}

pub fn induced_subgraph(g: &Graph, nodes: &[usize]) -> Result<Graph> {
    g.induced_subgraph(nodes)
}
