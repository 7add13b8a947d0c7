use serde::{Serialize, Serializer};

use super::Partition;
use crate::error::Result;
use crate::graph::Graph;

/// Cut-quality functionals of a partition. Volumes are sums of weighted
/// degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutMetrics {
    /// Total weight of edges crossing between clusters.
    pub cut_weight: f64,
    /// `sum_a cut(C_a) / |C_a|`
    pub ratio_cut: f64,
    /// `sum_a cut(C_a) / vol(C_a)`
    pub normalized_cut: f64,
    /// `max_a cut(C_a) / min(vol(C_a), vol(V \ C_a))`
    pub cheeger: f64,
}

pub fn cut_metrics(g: &Graph, p: &Partition) -> Result<CutMetrics> {
    p.check_covers(g)?;
    let k = p.k();
    let assign = p.assignment();
    let mut boundary = vec![0.0; k];
    let mut volume = vec![0.0; k];
    let mut cut_weight = 0.0;
    for e in g.edges() {
        let (a, b) = (assign[e.u], assign[e.v]);
        volume[a] += e.weight;
        volume[b] += e.weight;
        if a != b {
            boundary[a] += e.weight;
            boundary[b] += e.weight;
            cut_weight += e.weight;
        }
    }
    let total_volume: f64 = volume.iter().sum();
    let sizes = p.sizes();
    let ratio = |num: f64, den: f64| if num == 0.0 { 0.0 } else { num / den };
    let mut m = CutMetrics { cut_weight, ratio_cut: 0.0, normalized_cut: 0.0, cheeger: 0.0 };
    for a in 0..k {
        m.ratio_cut += ratio(boundary[a], sizes[a] as f64);
        m.normalized_cut += ratio(boundary[a], volume[a]);
        let smaller = volume[a].min(total_volume - volume[a]);
        m.cheeger = m.cheeger.max(ratio(boundary[a], smaller));
    }
    Ok(m)
}

/// Which cut functional to minimize when thresholding a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutCriterion {
    #[default]
    Cheeger,
    Ratio,
    Normalized,
}

/// Value of `criterion` for the two-way split `(S, V \ S)` given the crossing
/// weight, both sizes and both volumes.
pub fn bipartition_cut_value(criterion: CutCriterion, cut: f64, sizes: (usize, usize), volumes: (f64, f64)) -> f64 {
    if cut == 0.0 {
        return 0.0;
    }
    match criterion {
        CutCriterion::Cheeger => cut / volumes.0.min(volumes.1),
        CutCriterion::Ratio => cut / sizes.0 as f64 + cut / sizes.1 as f64,
        CutCriterion::Normalized => cut / volumes.0 + cut / volumes.1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterProfile {
    pub cluster: usize,
    pub size: usize,
    pub internal_weight: f64,
    pub external_weight: f64,
    /// `internal_weight` per intra-cluster node pair; 0 for singletons.
    pub internal_density: f64,
    /// `internal_density` divided by external weight per external pair;
    /// infinite when nothing leaves the cluster.
    #[serde(serialize_with = "serialize_extended")]
    pub separation: f64,
}

/// Per-cluster internal/external connectivity.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ConnectivityProfile {
    pub clusters: Vec<ClusterProfile>,
}

impl ConnectivityProfile {
    pub fn total_internal_weight(&self) -> f64 {
        self.clusters.iter().map(|c| c.internal_weight).sum()
    }

    pub fn total_external_weight(&self) -> f64 {
        self.clusters.iter().map(|c| c.external_weight).sum()
    }
}

pub fn connectivity_profile(g: &Graph, p: &Partition) -> Result<ConnectivityProfile> {
    p.check_covers(g)?;
    let n = g.n();
    let k = p.k();
    let assign = p.assignment();
    let mut internal = vec![0.0; k];
    let mut external = vec![0.0; k];
    for e in g.edges() {
        let (a, b) = (assign[e.u], assign[e.v]);
        if a == b {
            internal[a] += e.weight;
        } else {
            external[a] += e.weight;
            external[b] += e.weight;
        }
    }
    let clusters = p
        .sizes()
        .into_iter()
        .enumerate()
        .map(|(a, size)| {
            let pairs = size * size.saturating_sub(1) / 2;
            let internal_density = if pairs == 0 { 0.0 } else { internal[a] / pairs as f64 };
            let external_pairs = size * (n - size);
            let separation = if external[a] == 0.0 || external_pairs == 0 {
                f64::INFINITY
            } else {
                internal_density / (external[a] / external_pairs as f64)
            };
            ClusterProfile {
                cluster: a,
                size,
                internal_weight: internal[a],
                external_weight: external[a],
                internal_density,
                separation,
            }
        })
        .collect();
    Ok(ConnectivityProfile { clusters })
}

/// Finite values as numbers, infinities as the strings `"inf"` / `"-inf"`.
pub(crate) fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}
