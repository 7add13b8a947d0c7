//! K-means over spectral embeddings with L2, L1 and fractional distances.
//!
//! Euclidean uses coordinate means as centers and minimizes squared
//! distance. Manhattan and fractional use coordinate-wise medians.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Partition;
use crate::error::{Error, Result};
use crate::spectral::Embedding;

const RESTARTS: u64 = 20;
const MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Euclidean,
    Manhattan,
    /// `(sum_c |x_c - y_c|^q)^(1/q)` with `0 < q < 1`.
    Fractional(f64),
}

impl Metric {
    /// Default fractional exponent.
    pub const DEFAULT_Q: f64 = 0.5;

    fn validate(self) -> Result<()> {
        match self {
            Metric::Fractional(q) if !(q > 0.0 && q < 1.0) => Err(Error::InvalidFractionalExponent(q)),
            _ => Ok(()),
        }
    }

    /// Per-point cost used by the objective and assignment.
    fn cost(self, a: &[f64], b: &[f64]) -> f64 {
        let pairs = a.iter().zip(b);
        match self {
            Metric::Euclidean => pairs.map(|(x, y)| (x - y) * (x - y)).sum(),
            Metric::Manhattan => pairs.map(|(x, y)| (x - y).abs()).sum(),
            Metric::Fractional(q) => pairs.map(|(x, y)| (x - y).abs().powf(q)).sum::<f64>().powf(1.0 / q),
        }
    }

    fn uses_median(self) -> bool {
        !matches!(self, Metric::Euclidean)
    }
}

/// Cluster embedding rows into `k` groups; see [`kway_cluster_points`].
pub fn kway_embedding_cluster(e: &Embedding, k: usize, metric: Metric, seed: u64) -> Result<Partition> {
    kway_cluster_points(e.coordinates(), k, metric, seed).map(|(p, _)| p)
}

/// K-means on the rows of `points`: 20 seeded k-means++ restarts (restart `r`
/// uses ChaCha stream `r` of `seed`), best objective kept, ties to the lowest
/// restart. Returns the partition (ids by first appearance) and its objective.
pub fn kway_cluster_points(points: &DMatrix<f64>, k: usize, metric: Metric, seed: u64) -> Result<(Partition, f64)> {
    metric.validate()?;
    let n = points.nrows();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| points.row(i).iter().copied().collect()).collect();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, min: 1, max: n });
    }
    let distinct = count_distinct(&rows);
    if k > distinct {
        return Err(Error::TooFewDistinctPoints { distinct, k });
    }

    let runs: Vec<(f64, Vec<usize>)> = (0..RESTARTS)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart);
            lloyd(&rows, k, metric, &mut rng)
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.0 < runs[best].0 {
            best = i;
        }
    }
    let (objective, assignment) = &runs[best];
    if !objective.is_finite() {
        return Err(Error::ConvergenceFailure(format!("k-means left a cluster empty in every restart (k = {k})")));
    }
    Ok((Partition::canonical(assignment), *objective))
}

fn count_distinct(rows: &[Vec<f64>]) -> usize {
    let mut sorted: Vec<&Vec<f64>> = rows.iter().collect();
    let cmp = |a: &&Vec<f64>, b: &&Vec<f64>| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    sorted.sort_by(cmp);
    sorted.dedup_by(|a, b| cmp(&&**a, &&**b).is_eq());
    sorted.len()
}

fn seed_centers(rows: &[Vec<f64>], k: usize, metric: Metric, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut centers = vec![rows[rng.gen_range(0..n)].clone()];
    let mut nearest: Vec<f64> = rows.iter().map(|r| metric.cost(r, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let target = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = None;
        for (i, &w) in nearest.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            pick = Some(i);
            if acc > target {
                break;
            }
        }
        // there are at least k distinct rows, so some weight is positive
        let pick = pick.expect("k-means++ ran out of distinct points");
        centers.push(rows[pick].clone());
        for (i, r) in rows.iter().enumerate() {
            nearest[i] = nearest[i].min(metric.cost(r, &rows[pick]));
        }
    }
    centers
}

fn nearest_center(row: &[f64], centers: &[Vec<f64>], metric: Metric) -> (usize, f64) {
    let mut best = (0, metric.cost(row, &centers[0]));
    for (c, center) in centers.iter().enumerate().skip(1) {
        let d = metric.cost(row, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn update_centers(rows: &[Vec<f64>], assignment: &[usize], k: usize, metric: Metric, centers: &mut [Vec<f64>]) {
    let dim = rows[0].len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &a) in assignment.iter().enumerate() {
        members[a].push(i);
    }
    for (c, idx) in members.iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        for d in 0..dim {
            centers[c][d] = if metric.uses_median() {
                let mut vals: Vec<f64> = idx.iter().map(|&i| rows[i][d]).collect();
                vals.sort_by(f64::total_cmp);
                let mid = vals.len() / 2;
                if vals.len() % 2 == 1 {
                    vals[mid]
                } else {
                    0.5 * (vals[mid - 1] + vals[mid])
                }
            } else {
                idx.iter().map(|&i| rows[i][d]).sum::<f64>() / idx.len() as f64
            };
        }
    }
}

fn lloyd(rows: &[Vec<f64>], k: usize, metric: Metric, rng: &mut ChaCha8Rng) -> (f64, Vec<usize>) {
    let mut centers = seed_centers(rows, k, metric, rng);
    let mut assignment: Vec<usize> = rows.iter().map(|r| nearest_center(r, &centers, metric).0).collect();
    for _ in 0..MAX_ITERATIONS {
        let mut sizes = vec![0usize; k];
        for &a in &assignment {
            sizes[a] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            // move the empty center onto the worst-served point
            let (far, _) = rows
                .iter()
                .enumerate()
                .map(|(i, r)| (i, metric.cost(r, &centers[assignment[i]])))
                .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
            centers[empty] = rows[far].clone();
        } else {
            update_centers(rows, &assignment, k, metric, &mut centers);
        }
        let next: Vec<usize> = rows.iter().map(|r| nearest_center(r, &centers, metric).0).collect();
        let stable = next == assignment && sizes.iter().all(|&s| s > 0);
        assignment = next;
        if stable {
            break;
        }
    }
    let mut used = vec![false; k];
    for &a in &assignment {
        used[a] = true;
    }
    if used.contains(&false) {
        return (f64::INFINITY, assignment);
    }
    update_centers(rows, &assignment, k, metric, &mut centers);
    let objective = rows
        .iter()
        .zip(&assignment)
        .map(|(r, &a)| metric.cost(r, &centers[a]))
        .sum();
    (objective, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::bridged_triangles;
    use crate::graph::{sbm_generate, LaplacianKind};
    use crate::spectral::{eigendecompose, spectral_embedding};

    fn two_triangle_embedding(dim: usize) -> Embedding {
        let s = eigendecompose(&bridged_triangles().laplacian(LaplacianKind::Combinatorial)).unwrap();
        spectral_embedding(&s, dim).unwrap()
    }

    /// Minimal squared-distance objective over all 2-partitions, by enumeration.
    fn brute_force_two_means(points: &DMatrix<f64>) -> Vec<usize> {
        let n = points.nrows();
        let mut best = (f64::INFINITY, vec![]);
        for mask in 1u32..(1 << (n - 1)) {
            let assign: Vec<usize> = (0..n).map(|i| ((mask >> i) & 1) as usize).collect();
            let mut cost = 0.0;
            for c in 0..2 {
                let idx: Vec<usize> = (0..n).filter(|&i| assign[i] == c).collect();
                let mean: Vec<f64> = (0..points.ncols())
                    .map(|d| idx.iter().map(|&i| points[(i, d)]).sum::<f64>() / idx.len() as f64)
                    .collect();
                for &i in &idx {
                    cost += (0..points.ncols()).map(|d| (points[(i, d)] - mean[d]).powi(2)).sum::<f64>();
                }
            }
            if cost < best.0 {
                best = (cost, assign);
            }
        }
        Partition::canonical(&best.1).assignment().to_vec()
    }

    #[test]
    fn two_triangles_match_brute_force() {
        let e = two_triangle_embedding(1);
        let oracle = brute_force_two_means(e.coordinates());
        assert_eq!(oracle, vec![0, 0, 0, 1, 1, 1]);
        for metric in [Metric::Euclidean, Metric::Manhattan, Metric::Fractional(0.5)] {
            let p = kway_embedding_cluster(&e, 2, metric, 0).unwrap();
            assert_eq!(p.assignment(), oracle.as_slice(), "{metric:?}");
        }
    }

    #[test]
    fn fractional_agrees_with_manhattan_on_separated_blocks() {
        let g = sbm_generate(3, 6, 0.9, 0.02, 4).unwrap();
        let s = eigendecompose(&g.laplacian(LaplacianKind::Combinatorial)).unwrap();
        let e = spectral_embedding(&s, 2).unwrap();
        let a = kway_embedding_cluster(&e, 3, Metric::Manhattan, 1).unwrap();
        let b = kway_embedding_cluster(&e, 3, Metric::Fractional(0.5), 1).unwrap();
        assert_eq!(a, b);
        let truth = Partition::new((0..18).map(|i| i / 6).collect()).unwrap();
        assert_eq!(crate::partition::tests::best_match_agreement(&a, &truth), 1.0);
    }

    #[test]
    fn coincident_points_cluster_together() {
        let g = sbm_generate(2, 5, 1.0, 0.0, 0).unwrap();
        let s = eigendecompose(&g.laplacian(LaplacianKind::Combinatorial)).unwrap();
        // the two zero eigenvectors are block indicators after canonicalization
        let points = s.eigenvectors().columns(0, 2).into_owned();
        for metric in [Metric::Euclidean, Metric::Manhattan, Metric::Fractional(0.3)] {
            let (p, _) = kway_cluster_points(&points, 2, metric, 11).unwrap();
            assert_eq!(p.assignment(), &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let g = sbm_generate(3, 10, 0.6, 0.1, 5).unwrap();
        let s = eigendecompose(&g.laplacian(LaplacianKind::Combinatorial)).unwrap();
        let e = spectral_embedding(&s, 3).unwrap();
        for metric in [Metric::Euclidean, Metric::Manhattan, Metric::Fractional(0.5)] {
            let a = kway_cluster_points(e.coordinates(), 3, metric, 9).unwrap();
            let b = kway_cluster_points(e.coordinates(), 3, metric, 9).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.0.k(), 3);
        }
    }

    #[test]
    fn argument_errors() {
        let e = two_triangle_embedding(1);
        assert_eq!(
            kway_embedding_cluster(&e, 2, Metric::Fractional(1.0), 0).unwrap_err(),
            Error::InvalidFractionalExponent(1.0)
        );
        let dup = DMatrix::from_row_slice(3, 1, &[1.0, 1.0, 2.0]);
        assert_eq!(
            kway_cluster_points(&dup, 3, Metric::Euclidean, 0).unwrap_err(),
            Error::TooFewDistinctPoints { distinct: 2, k: 3 }
        );
        assert!(kway_cluster_points(&dup, 0, Metric::Euclidean, 0).is_err());
    }
}
