use rayon::prelude::*;

use super::{require_positive, round1_release, EstimatorOutput, LazyNoisyGraph, NoisyEdges, NoisyGraph};
use crate::error::{Error, Result};
use crate::graph::{project, NeighborList, NeighborLists};
use crate::mech::{laplace, BitRow, PrivacyBudget, Role, Stream, TrialSource};

/// How the collector holds the round-1 noisy graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Round1Mode {
    /// Every released row is materialized: `O(n^2)` time and bits.
    Eager,
    /// Noisy entries are derived on demand, only for pairs queried in
    /// round 2: `O(n·d_tilde^2)` in total. Bit-identical to `Eager`.
    #[default]
    Lazy,
}

/// Laplace scale used in round 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Round2Noise {
    /// `d_tilde / eps2`.
    #[default]
    AsListed,
    /// `d_tilde·(1 - p1) / eps2`.
    Tight,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TwoRoundOptions {
    pub round1: Round1Mode,
    pub noise: Round2Noise,
}

/// Per-user round-2 statistics over lower neighbors `L` of the projected
/// list: `s = C(|L|, 2)` wedges, `t` of them closed in the noisy graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Round2Counts {
    pub t: u64,
    pub s: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UserRound2Message {
    pub w_hat: f64,
}

pub fn round2_counts<E: NoisyEdges + ?Sized>(projected: &NeighborList, noisy: &E) -> Round2Counts {
    let lower = projected.lower();
    let s = (lower.len() as u64) * (lower.len() as u64).saturating_sub(1) / 2;
    let mut t = 0;
    for (x, &j) in lower.iter().enumerate() {
        for &k in &lower[x + 1..] {
            t += noisy.has_edge(j as usize, k as usize) as u64;
        }
    }
    Round2Counts { t, s }
}

/// User side of round 2: project, count, release `t - p1·s + Lap(scale)`.
#[allow(clippy::too_many_arguments)]
pub fn round2_release<E: NoisyEdges + ?Sized>(
    a: &NeighborList,
    noisy: &E,
    p1: f64,
    eps2: f64,
    d_tilde: usize,
    noise_kind: Round2Noise,
    projection: &mut Stream,
    noise: &mut Stream,
) -> Result<UserRound2Message> {
    require_positive("eps2", eps2)?;
    let projected = project(a, d_tilde, projection);
    let c = round2_counts(&projected, noisy);
    let scale = match noise_kind {
        Round2Noise::AsListed => d_tilde as f64 / eps2,
        Round2Noise::Tight => d_tilde as f64 * (1.0 - p1) / eps2,
    };
    Ok(UserRound2Message {
        w_hat: c.t as f64 - p1 * c.s as f64 + laplace(noise, scale)?,
    })
}

/// Collector side of round 2: `Σ ŵ_i / (1 - 2·p1)`.
pub fn aggregate_round2(messages: &[UserRound2Message], p1: f64) -> Result<f64> {
    let denom = 1.0 - 2.0 * p1;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::invalid(format!("flip probability {p1} leaves nothing to debias")));
    }
    if denom < 1e-12 {
        return Err(Error::Conditioning(format!("1 - 2·p1 = {denom:e} is too small to divide by")));
    }
    Ok(messages.iter().map(|m| m.w_hat).sum::<f64>() / denom)
}

/// Two-round triangle estimator: randomized response at `eps1`, then
/// per-user Laplace releases at `eps2` that are checked against the noisy
/// graph. Unbiased when `d_tilde` is at least the maximum degree.
pub fn local_2rounds_triangle<U: NeighborLists + ?Sized>(
    users: &U,
    eps1: f64,
    eps2: f64,
    d_tilde: usize,
    source: &TrialSource,
    options: TwoRoundOptions,
) -> Result<EstimatorOutput> {
    require_positive("eps1", eps1)?;
    require_positive("eps2", eps2)?;
    if eps1 < 1e-12 {
        return Err(Error::Conditioning(format!("eps1 = {eps1:e} makes 1 - 2·p1 underflow")));
    }
    let p1 = source.rr_channel_flip_prob(eps1);
    let messages = match options.round1 {
        Round1Mode::Lazy => round2_all(users, &LazyNoisyGraph::new(users, eps1, source), p1, eps2, d_tilde, options, source)?,
        Round1Mode::Eager => {
            let rows: Vec<BitRow> = (0..users.num_users())
                .into_par_iter()
                .map(|i| {
                    let a = users.neighbor_list(i);
                    round1_release(&a, eps1, &mut source.stream(Role::RandomizedResponse, i as u64))
                })
                .collect();
            round2_all(users, &NoisyGraph::from_rows(&rows)?, p1, eps2, d_tilde, options, source)?
        }
    };
    Ok(EstimatorOutput {
        estimate: aggregate_round2(&messages, p1)?,
        budget_spent: PrivacyBudget { eps0: 0.0, eps1, eps2 },
        rounds: 2,
        algorithm: "local-2rounds-tri",
        d_tilde: Some(d_tilde),
        k: None,
    })
}

fn round2_all<U: NeighborLists + ?Sized, E: NoisyEdges>(
    users: &U,
    noisy: &E,
    p1: f64,
    eps2: f64,
    d_tilde: usize,
    options: TwoRoundOptions,
    source: &TrialSource,
) -> Result<Vec<UserRound2Message>> {
    (0..users.num_users())
        .into_par_iter()
        .map(|i| {
            round2_release(
                &users.neighbor_list(i),
                noisy,
                p1,
                eps2,
                d_tilde,
                options.noise,
                &mut source.stream(Role::Projection, i as u64),
                &mut source.stream(Role::CountNoise, i as u64),
            )
        })
        .collect()
}
