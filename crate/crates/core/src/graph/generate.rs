use rand::seq::index;
use rand::Rng;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// Erdős–Rényi `G(n, alpha)`: every unordered pair is an edge independently
/// with probability `alpha`.
///
/// Runs in `O(n + m)` by jumping between successive edges with geometric
/// gaps over the lower-triangular pair order `(v, w)`, `w < v`.
pub fn generate_er<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("edge probability {alpha} outside [0, 1]")));
    }
    if n > NodeId::MAX as usize {
        return Err(Error::invalid(format!("{n} nodes exceed the 32-bit id space")));
    }
    if alpha == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut adjacency: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    if alpha > 0.0 && n >= 2 {
        let log_q = (-alpha).ln_1p();
        let (mut v, mut w) = (1usize, -1i64);
        loop {
            let r: f64 = rng.random();
            let gap = ((-r).ln_1p() / log_q).floor();
            // Saturate absurd gaps; any value past the last pair ends the walk.
            w = w.saturating_add(1).saturating_add(gap.min(i64::MAX as f64 / 2.0) as i64);
            while v < n && w >= v as i64 {
                w -= v as i64;
                v += 1;
            }
            if v >= n {
                break;
            }
            adjacency[v].push(w as NodeId);
            adjacency[w as usize].push(v as NodeId);
        }
    }
    Ok(Graph::from_unsorted_adjacency(adjacency))
}

/// Induced subgraph on `n_sub` nodes drawn uniformly without replacement,
/// relabeled `0..n_sub` in increasing order of original id.
pub fn sample_induced<R: Rng + ?Sized>(g: &Graph, n_sub: usize, rng: &mut R) -> Result<Graph> {
    if n_sub > g.n() {
        return Err(Error::invalid(format!(
            "cannot sample {n_sub} nodes from a graph with {}",
            g.n()
        )));
    }
    let mut chosen = index::sample(rng, g.n(), n_sub).into_vec();
    chosen.sort_unstable();
    let mut relabel = vec![NodeId::MAX; g.n()];
    for (new, &old) in chosen.iter().enumerate() {
        relabel[old] = new as NodeId;
    }
    let adjacency = chosen
        .iter()
        .map(|&old| {
            g.neighbors(old)
                .iter()
                .map(|&v| relabel[v as usize])
                .filter(|&v| v != NodeId::MAX)
                .collect()
        })
        .collect();
    Ok(Graph::from_unsorted_adjacency(adjacency))
}
