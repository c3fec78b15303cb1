use rayon::prelude::*;

use super::{require_positive, EstimatorOutput};
use crate::error::{Error, Result};
use crate::graph::{binomial, project, NeighborList, NeighborLists};
use crate::mech::{laplace, PrivacyBudget, Role, Stream, TrialSource};

pub(crate) fn kstar_sensitivity(d_tilde: usize, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k-star size must be at least 1"));
    }
    binomial(d_tilde as u64, k as u64 - 1)
        .map(|d| d as f64)
        .ok_or_else(|| Error::Overflow(format!("C({d_tilde}, {}) exceeds 128 bits", k - 1)))
}

/// User side: project to `d_tilde`, count the k-stars centered at the owner,
/// release with `Lap(C(d_tilde, k-1) / eps)`.
pub fn kstar_release(
    a: &NeighborList,
    eps: f64,
    d_tilde: usize,
    k: u32,
    projection: &mut Stream,
    noise: &mut Stream,
) -> Result<f64> {
    require_positive("eps", eps)?;
    let delta = kstar_sensitivity(d_tilde, k)?;
    let projected = project(a, d_tilde, projection);
    let stars = binomial(projected.degree() as u64, k as u64)
        .ok_or_else(|| Error::Overflow("per-user k-star count".into()))?;
    Ok(stars as f64 + laplace(noise, delta / eps)?)
}

/// Collector side: sum of released values, in user order.
pub fn aggregate_sum(released: &[f64]) -> f64 {
    released.iter().sum()
}

/// One-round k-star estimator with per-user Laplace noise. Unbiased when
/// `d_tilde` is at least the maximum degree.
pub fn local_lap_kstar<U: NeighborLists + ?Sized>(
    users: &U,
    eps: f64,
    d_tilde: usize,
    k: u32,
    source: &TrialSource,
) -> Result<EstimatorOutput> {
    require_positive("eps", eps)?;
    kstar_sensitivity(d_tilde, k)?;
    let released = (0..users.num_users())
        .into_par_iter()
        .map(|i| {
            let a = users.neighbor_list(i);
            kstar_release(
                &a,
                eps,
                d_tilde,
                k,
                &mut source.stream(Role::Projection, i as u64),
                &mut source.stream(Role::CountNoise, i as u64),
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(EstimatorOutput {
        estimate: aggregate_sum(&released),
        budget_spent: PrivacyBudget::laplace(eps),
        rounds: 1,
        algorithm: "local-lap-kstar",
        d_tilde: Some(d_tilde),
        k: Some(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_kstars, project_with_order, Graph, NodeId};
    use crate::mech::RandomSource;

    #[test]
    fn noiseless_k4_equals_oracle() {
        let k4 = Graph::complete(4);
        let src = RandomSource::new(1).without_laplace_noise().trial(0);
        let out = local_lap_kstar(&k4, 1.0, 3, 2, &src).unwrap();
        assert_eq!(out.estimate, 12.0);
        assert_eq!(out.estimate, count_kstars(&k4, 2).unwrap() as f64);
        assert_eq!(out.budget_spent, PrivacyBudget::laplace(1.0));
    }

    #[test]
    fn zero_budget_is_rejected() {
        let src = RandomSource::new(1).trial(0);
        assert!(local_lap_kstar(&Graph::complete(4), 0.0, 3, 2, &src).is_err());
        assert!(local_lap_kstar(&Graph::complete(4), 1.0, 3, 0, &src).is_err());
    }

    #[test]
    fn empty_graph_is_pure_noise() {
        let g = Graph::empty(30);
        let trials = 400;
        let estimates: Vec<f64> = (0..trials)
            .map(|t| local_lap_kstar(&g, 1.0, 4, 2, &RandomSource::new(5).trial(t)).unwrap().estimate)
            .collect();
        let mean = estimates.iter().sum::<f64>() / trials as f64;
        // Var = n · 2 (Δ/ε)², Δ = C(4, 1) = 4.
        let se = (30.0 * 2.0 * 16.0 / trials as f64).sqrt();
        assert!(mean.abs() < 4.0 * se, "{mean}");
        assert!(estimates.iter().any(|&x| x != 0.0));
    }

    #[test]
    fn k4_mean_and_variance() {
        let k4 = Graph::complete(4);
        let trials = 10_000;
        let xs: Vec<f64> = (0..trials)
            .map(|t| local_lap_kstar(&k4, 1.0, 3, 2, &RandomSource::new(77).trial(t)).unwrap().estimate)
            .collect();
        let mean = xs.iter().sum::<f64>() / trials as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0);
        let expected_var = 2.0 * 4.0 * 9.0;
        assert!((mean - 12.0).abs() < 4.0 * (expected_var / trials as f64).sqrt(), "{mean}");
        assert!((var / expected_var - 1.0).abs() < 0.1, "{var}");
    }

    /// All lists on `n` nodes owned by `owner`, as neighbor bitmasks over
    /// the other nodes.
    fn every_list(owner: usize, n: usize) -> impl Iterator<Item = NeighborList> {
        let others: Vec<NodeId> = (0..n as NodeId).filter(|&v| v as usize != owner).collect();
        (0u32..1 << others.len()).map(move |mask| {
            let nbrs = others.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v).collect();
            NeighborList::new(owner, n, nbrs).unwrap()
        })
    }

    #[test]
    fn per_user_sensitivity_after_projection() {
        // Projected degree is min(d, d_tilde) for every permutation, so the
        // identity order suffices for k-star counts.
        for n in 2..=10 {
            let order: Vec<NodeId> = (0..n as NodeId).collect();
            let owner = n - 1;
            for a in every_list(owner, n) {
                for extra in (0..n).filter(|&j| j != owner && !a.contains(j)) {
                    let mut nb = a.neighbors().to_vec();
                    nb.push(extra as NodeId);
                    let b = NeighborList::new(owner, n, nb).unwrap();
                    for d_tilde in 0..=n {
                        for k in [1u32, 2, 3] {
                            let r = |l: &NeighborList| {
                                let p = project_with_order(l, d_tilde, &order).unwrap();
                                binomial(p.degree() as u64, k as u64).unwrap() as f64
                            };
                            let delta = kstar_sensitivity(d_tilde, k).unwrap();
                            assert!((r(&a) - r(&b)).abs() <= delta);
                        }
                    }
                }
            }
        }
    }
}
