use rand::seq::index;
use rand::Rng;

use super::{NeighborList, NodeId};
use crate::error::{Error, Result};

/// Graph projection: truncates a neighbor list to at most `d_tilde`
/// neighbors.
///
/// Lists already within the cap are returned unchanged and consume no
/// randomness. Otherwise the kept neighbors are the first `d_tilde` in the
/// order of a uniformly random permutation of all nodes; restricted to the
/// neighbors that is a uniform `d_tilde`-subset, which is what is drawn.
pub fn project<R: Rng + ?Sized>(a: &NeighborList, d_tilde: usize, rng: &mut R) -> NeighborList {
    let degree = a.degree();
    if degree <= d_tilde {
        return a.clone();
    }
    let mut kept: Vec<NodeId> = index::sample(rng, degree, d_tilde)
        .into_iter()
        .map(|i| a.neighbors()[i])
        .collect();
    kept.sort_unstable();
    a.with_neighbors(kept)
}

/// Projection with an explicit node order (a permutation of `0..n`): keeps
/// the first `d_tilde` neighbors encountered along `order`.
pub fn project_with_order(a: &NeighborList, d_tilde: usize, order: &[NodeId]) -> Result<NeighborList> {
    let n = a.n();
    let mut seen = vec![false; n];
    if order.len() != n
        || !order.iter().all(|&v| (v as usize) < n && !std::mem::replace(&mut seen[v as usize], true))
    {
        return Err(Error::invalid(format!("order is not a permutation of 0..{n}")));
    }
    if a.degree() <= d_tilde {
        return Ok(a.clone());
    }
    let mut kept: Vec<NodeId> = order
        .iter()
        .copied()
        .filter(|&v| a.contains(v as usize))
        .take(d_tilde)
        .collect();
    kept.sort_unstable();
    Ok(a.with_neighbors(kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn worked_example_from_permutation() {
        // a_1 = (0,1,0,1,1,1), cap 3, permutation 2,3,4,1,6,5 (1-based).
        let a = NeighborList::from_indicator(0, &[0, 1, 0, 1, 1, 1]).unwrap();
        let order: Vec<NodeId> = [2, 3, 4, 1, 6, 5].iter().map(|v| v - 1).collect();
        let p = project_with_order(&a, 3, &order).unwrap();
        assert_eq!(p.to_indicator(), vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn order_must_be_a_permutation() {
        let a = NeighborList::new(0, 3, vec![1, 2]).unwrap();
        assert!(project_with_order(&a, 1, &[0, 1]).is_err());
        assert!(project_with_order(&a, 1, &[0, 1, 1]).is_err());
        assert!(project_with_order(&a, 1, &[0, 1, 3]).is_err());
    }

    #[test]
    fn under_cap_is_a_no_op() {
        let a = NeighborList::new(3, 10, vec![0, 5, 9]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(project(&a, 3, &mut rng), a);
        assert_eq!(project(&a, 7, &mut rng), a);
    }

    #[test]
    fn five_neighbors_capped_at_two() {
        let a = NeighborList::new(0, 8, vec![1, 3, 4, 6, 7]).unwrap();
        for seed in 0..200 {
            let p = project(&a, 2, &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(p.degree(), 2);
            assert!(p.neighbors().iter().all(|&v| a.contains(v as usize)));
        }
    }

    #[test]
    fn kept_subsets_are_uniform() {
        // 4 neighbors, cap 2: each of the 6 subsets should be equally likely.
        let a = NeighborList::new(0, 5, vec![1, 2, 3, 4]).unwrap();
        let mut counts = std::collections::HashMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let trials = 12_000;
        for _ in 0..trials {
            *counts.entry(project(&a, 2, &mut rng).neighbors().to_vec()).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expect = trials as f64 / 6.0;
        let sigma = (expect * (5.0 / 6.0)).sqrt();
        for (subset, c) in counts {
            assert!((c as f64 - expect).abs() < 4.5 * sigma, "{subset:?}: {c}");
        }
    }

    proptest! {
        #[test]
        fn projection_invariants(bits in proptest::collection::vec(any::<bool>(), 1..40), cap in 0usize..20, seed in any::<u64>()) {
            let n = bits.len() + 1;
            let nbrs: Vec<NodeId> = bits.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j as NodeId + 1).collect();
            let a = NeighborList::new(0, n, nbrs).unwrap();
            let p = project(&a, cap, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert!(p.degree() <= cap);
            prop_assert_eq!(p.degree(), a.degree().min(cap));
            prop_assert!(p.neighbors().iter().all(|&v| a.contains(v as usize)));
            let again = project(&p, cap, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(again, p);
        }
    }
}
