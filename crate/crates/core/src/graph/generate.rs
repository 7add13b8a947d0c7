//! Planted-partition random graphs used as cluster-recovery fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};
use crate::partition::Partition;

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(format!("{name} = {p} outside [0, 1]")))
    }
}

fn check_shape(blocks: usize, nodes_per_block: usize) -> Result<()> {
    if blocks < 2 || nodes_per_block < 2 {
        return Err(Error::InvalidBlockShape { blocks, nodes_per_block });
    }
    Ok(())
}

/// Unit-weight stochastic block model. Node `i` belongs to block
/// `i / nodes_per_block`; pairs are visited in `(i, j)` lexicographic order
/// and each consumes one uniform draw, so the edge set depends only on the
/// parameters and `seed`.
pub fn sbm_generate(blocks: usize, nodes_per_block: usize, p_in: f64, p_out: f64, seed: u64) -> Result<Graph> {
    check_shape(blocks, nodes_per_block)?;
    check_probability("p_in", p_in)?;
    check_probability("p_out", p_out)?;
    if p_out > p_in {
        return Err(Error::InvalidProbability(format!("p_out = {p_out} exceeds p_in = {p_in}")));
    }
    let m = nodes_per_block;
    generate(blocks * m, seed, |i, j| if i / m == j / m { p_in } else { p_out })
}

/// Two-level planted partition: `super_blocks` groups of `blocks_per_super`
/// blocks of `nodes_per_block` nodes. Pairs in the same block connect with
/// `p_in`, pairs in sibling blocks with `p_mid`, all others with `p_out`.
pub fn nested_sbm_generate(
    super_blocks: usize,
    blocks_per_super: usize,
    nodes_per_block: usize,
    probabilities: (f64, f64, f64),
    seed: u64,
) -> Result<Graph> {
    let (p_in, p_mid, p_out) = probabilities;
    check_shape(super_blocks * blocks_per_super, nodes_per_block)?;
    if super_blocks == 0 || blocks_per_super == 0 {
        return Err(Error::InvalidBlockShape { blocks: 0, nodes_per_block });
    }
    check_probability("p_in", p_in)?;
    check_probability("p_mid", p_mid)?;
    check_probability("p_out", p_out)?;
    if !(p_out <= p_mid && p_mid <= p_in) {
        return Err(Error::InvalidProbability(format!(
            "expected p_out <= p_mid <= p_in, got {p_out}, {p_mid}, {p_in}"
        )));
    }
    let m = nodes_per_block;
    let super_size = m * blocks_per_super;
    generate(super_blocks * super_size, seed, |i, j| {
        if i / m == j / m {
            p_in
        } else if i / super_size == j / super_size {
            p_mid
        } else {
            p_out
        }
    })
}

fn generate(n: usize, seed: u64, prob: impl Fn(usize, usize) -> f64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let draw: f64 = rng.gen();
            if draw < prob(i, j) {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::with_default_labels(n, &edges)
}

/// Ground-truth block labels matching [`sbm_generate`].
pub fn planted_blocks(blocks: usize, nodes_per_block: usize) -> Partition {
    Partition::from_assignment_unchecked((0..blocks * nodes_per_block).map(|i| i / nodes_per_block).collect(), blocks)
}
