use rayon::prelude::*;

use super::{require_positive, EstimatorOutput, NoisyGraph};
use crate::error::{Error, Result};
use crate::graph::{NeighborList, NeighborLists, SubgraphClassCounts};
use crate::mech::{rr_lower_row, BitRow, PrivacyBudget, Role, Stream, TrialSource};

/// User side of the first round: randomized response on columns below the
/// owner only, so every pair is released by exactly one endpoint.
pub fn round1_release(a: &NeighborList, eps: f64, stream: &mut Stream) -> BitRow {
    rr_lower_row(stream, eps, a)
}

/// Weights `(a3, a2, a1, a0)` with `E[a3·m3 + a2·m2 + a1·m1 + a0·m0] = c3`,
/// i.e. the first column of the inverse of the triple-class transition
/// matrix under randomized response with `mu = e^eps`:
/// `(mu^3, -mu^2, mu, -1) / (mu - 1)^3`.
pub fn triangle_coefficients(mu: f64) -> Result<[f64; 4]> {
    if !(mu > 1.0 && mu.is_finite()) {
        return Err(Error::invalid(format!("mu = {mu} must be finite and > 1")));
    }
    let denom = (mu - 1.0).powi(3);
    Ok([mu.powi(3) / denom, -mu.powi(2) / denom, mu / denom, -1.0 / denom])
}

/// Debiased triangle count from the noisy graph's class counts. With an
/// identity channel (`rr_live == false`) the counts are exact and `m3` is
/// returned as is.
pub fn empirical_triangle_estimate(counts: &SubgraphClassCounts, eps: f64, rr_live: bool) -> Result<f64> {
    if !rr_live {
        return Ok(counts.m3 as f64);
    }
    let coef = triangle_coefficients(eps.exp())?;
    Ok(coef
        .iter()
        .zip(counts.as_array())
        .map(|(c, m)| c * m as f64)
        .sum())
}

/// One-round triangle estimator over randomized response. With
/// `use_empirical == false` it returns the raw noisy triangle count `m3`,
/// which is biased upward.
///
/// The collector counts all triples of a dense noisy graph: `O(n^3 / 64)`.
pub fn local_rr_triangle<U: NeighborLists + ?Sized>(
    users: &U,
    eps: f64,
    source: &TrialSource,
    use_empirical: bool,
) -> Result<EstimatorOutput> {
    require_positive("eps", eps)?;
    let rows: Vec<BitRow> = (0..users.num_users())
        .into_par_iter()
        .map(|i| {
            let a = users.neighbor_list(i);
            round1_release(&a, eps, &mut source.stream(Role::RandomizedResponse, i as u64))
        })
        .collect();
    let counts = NoisyGraph::from_rows(&rows)?.subgraph_classes()?;
    let estimate = if use_empirical {
        empirical_triangle_estimate(&counts, eps, source.rr_live())?
    } else {
        counts.m3 as f64
    };
    Ok(EstimatorOutput {
        estimate,
        budget_spent: PrivacyBudget::randomized_response(eps),
        rounds: 1,
        algorithm: if use_empirical { "local-rr-tri" } else { "local-rr-tri-noemp" },
        d_tilde: None,
        k: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_triangles, generate_er, Graph};
    use crate::mech::{rr_flip_prob, RandomSource};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Transition matrix from a triple's true class (triangle, 2-edges,
    /// 1-edge, none) to its class after independent flips with
    /// probability `1 / (mu + 1)`.
    fn q_matrix(mu: f64) -> [[f64; 4]; 4] {
        let s = (mu + 1.0).powi(3);
        let m2 = mu * mu;
        let m3 = m2 * mu;
        let rows = [
            [m3, 3.0 * m2, 3.0 * mu, 1.0],
            [m2, m3 + 2.0 * mu, 2.0 * m2 + 1.0, mu],
            [mu, 2.0 * m2 + 1.0, m3 + 2.0 * mu, m2],
            [1.0, 3.0 * mu, 3.0 * m2, m3],
        ];
        rows.map(|r| r.map(|x| x / s))
    }

    /// The same matrix from first principles: enumerate which of the three
    /// pairs flip.
    fn q_by_enumeration(mu: f64) -> [[f64; 4]; 4] {
        let p = 1.0 / (mu + 1.0);
        let mut q = [[0.0; 4]; 4];
        for (from_row, edges) in [3usize, 2, 1, 0].iter().enumerate() {
            for flips in 0u32..8 {
                let prob: f64 = (0..3).map(|b| if flips >> b & 1 == 1 { p } else { 1.0 - p }).product();
                let after = (0..3).filter(|&b| (b < *edges) != (flips >> b & 1 == 1)).count();
                q[from_row][3 - after] += prob;
            }
        }
        q
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(triangle_coefficients(2.0).unwrap(), [8.0, -4.0, 2.0, -1.0]);
        let c = triangle_coefficients(3.0).unwrap();
        let expected = [27.0 / 8.0, -9.0 / 8.0, 3.0 / 8.0, -1.0 / 8.0];
        for (a, b) in c.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(triangle_coefficients(1.0).is_err());
        assert!(triangle_coefficients(0.5).is_err());
        assert!(triangle_coefficients(f64::NAN).is_err());
    }

    #[test]
    fn closed_form_q_matches_enumeration() {
        for mu in [1.1, std::f64::consts::E, 7.389, 20.0] {
            let (a, b) = (q_matrix(mu), q_by_enumeration(mu));
            for i in 0..4 {
                for j in 0..4 {
                    assert!((a[i][j] - b[i][j]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn coefficients_are_first_column_of_q_inverse() {
        for mu in [1.1, std::f64::consts::E, 1f64.exp().powi(2), 20.0] {
            let q = q_matrix(mu);
            let c = triangle_coefficients(mu).unwrap();
            for (i, row) in q.iter().enumerate() {
                let dot: f64 = row.iter().zip(c).map(|(a, b)| a * b).sum();
                let target = if i == 0 { 1.0 } else { 0.0 };
                assert!((dot - target).abs() < 1e-9, "mu {mu} row {i}: {dot}");
            }
        }
    }

    #[test]
    fn expected_counts_invert_to_c3() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for mu in [0.5f64.exp(), 1f64.exp(), 2f64.exp()] {
            let q = q_matrix(mu);
            let coef = triangle_coefficients(mu).unwrap();
            for _ in 0..20 {
                let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(0..10_000) as f64);
                let expected: Vec<f64> = (0..4).map(|j| (0..4).map(|i| c[i] * q[i][j]).sum()).collect();
                let est: f64 = expected.iter().zip(coef).map(|(m, a)| m * a).sum();
                assert!((est - c[0]).abs() < 1e-6 * (1.0 + c.iter().sum::<f64>()), "{est} vs {}", c[0]);
            }
        }
    }

    #[test]
    fn identity_channel_returns_exact_count() {
        let g = generate_er(40, 0.2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let src = RandomSource::new(0).with_identity_rr().trial(0);
        for emp in [true, false] {
            let out = local_rr_triangle(&g, 1.0, &src, emp).unwrap();
            assert_eq!(out.estimate, count_triangles(&g) as f64);
        }
    }

    #[test]
    fn zero_budget_is_rejected() {
        let src = RandomSource::new(0).trial(0);
        assert!(local_rr_triangle(&Graph::complete(4), 0.0, &src, true).is_err());
    }

    #[test]
    fn empty_graph_bias_with_and_without_debiasing() {
        let g = Graph::empty(100);
        let trials = 100;
        let run = |emp: bool| -> Vec<f64> {
            (0..trials)
                .map(|t| local_rr_triangle(&g, 1.0, &RandomSource::new(31).trial(t), emp).unwrap().estimate)
                .collect()
        };
        let stats = |xs: &[f64]| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let sd = (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)).sqrt();
            (m, sd / (xs.len() as f64).sqrt())
        };
        let (mean, se) = stats(&run(true));
        assert!(mean.abs() < 4.0 * se, "{mean} ± {se}");
        // Without debiasing every triple is a noisy triangle with prob p^3.
        let expected = 161_700.0 * rr_flip_prob(1.0).powi(3);
        let (raw, raw_se) = stats(&run(false));
        assert!((raw - expected).abs() < 4.0 * raw_se, "{raw} vs {expected}");
        assert!((expected - 3146.0).abs() < 1.0);
    }
}
