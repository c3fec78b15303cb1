use rayon::prelude::*;

use super::require_positive;
use crate::error::{Error, Result};
use crate::graph::{NeighborList, NeighborLists};
use crate::mech::{laplace, Role, Stream, TrialSource};

/// User side: `d_i + Lap(1 / eps0)`.
pub fn noisy_degree_release(a: &NeighborList, eps0: f64, noise: &mut Stream) -> Result<f64> {
    require_positive("eps0", eps0)?;
    Ok(a.degree() as f64 + laplace(noise, 1.0 / eps0)?)
}

/// Collector side: the noisy max degree and the cap `floor(max(d̂_max, 0))`.
pub fn aggregate_max_degree(released: &[f64]) -> Result<(f64, usize)> {
    let d_hat_max = released
        .iter()
        .copied()
        .reduce(f64::max)
        .ok_or_else(|| Error::invalid("noisy max degree over an empty user set"))?;
    Ok((d_hat_max, d_hat_max.max(0.0).floor() as usize))
}

/// Private estimate of the maximum degree. Spends `eps0` under edge LDP and
/// `2·eps0` under entire-edge LDP.
pub fn noisy_max_degree<U: NeighborLists + ?Sized>(
    users: &U,
    eps0: f64,
    source: &TrialSource,
) -> Result<(f64, usize)> {
    require_positive("eps0", eps0)?;
    let released = (0..users.num_users())
        .into_par_iter()
        .map(|i| {
            noisy_degree_release(
                &users.neighbor_list(i),
                eps0,
                &mut source.stream(Role::DegreeNoise, i as u64),
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    aggregate_max_degree(&released)
}
