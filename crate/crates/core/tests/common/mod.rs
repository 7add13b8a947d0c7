#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_abstraction::Graph;

/// Random graph with edge probability `density` and weights in [0.5, 2).
pub fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < density {
                edges.push((i, j, rng.gen_range(0.5..2.0)));
            }
        }
    }
    Graph::with_default_labels(n, &edges).unwrap()
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = std::collections::BTreeMap::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v), rng.gen_range(0.5..2.0));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < density {
                edges.entry((i, j)).or_insert_with(|| rng.gen_range(0.5..2.0));
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().map(|((i, j), w)| (i, j, w)).collect();
    Graph::with_default_labels(n, &edges).unwrap()
}

/// Weighted graphs on 1..=max_n nodes.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(proptest::option::weighted(0.4, 0.1f64..5.0), pairs).prop_map(move |ws| {
            let mut edges = Vec::new();
            let mut t = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if let Some(w) = ws[t] {
                        edges.push((i, j, w));
                    }
                    t += 1;
                }
            }
            Graph::with_default_labels(n, &edges).unwrap()
        })
    })
}

/// Graph with nodes renamed by `perm` (old node `i` becomes `perm[i]`).
pub fn permuted(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<_> = g.edges().iter().map(|e| (perm[e.u], perm[e.v], e.weight)).collect();
    Graph::with_default_labels(g.n(), &edges).unwrap()
}

/// Component count by union-find.
pub fn union_find_components(g: &Graph) -> usize {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..g.n()).collect();
    let mut count = g.n();
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}
