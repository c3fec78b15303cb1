//! Private estimation protocols.
//!
//! Each protocol is split into user-side randomizers, which receive one
//! [`NeighborList`](crate::graph::NeighborList) plus whatever the collector
//! has published, and a collector-side aggregator, which receives only
//! released messages. The `local_*` drivers wire the two together over a
//! [`NeighborLists`](crate::graph::NeighborLists) view of the graph.

mod central;
mod degree;
mod kstar;
mod noisy_graph;
mod triangle;
mod two_rounds;

pub use central::{central_lap_kstar, central_lap_triangle, project_graph};
pub use degree::{aggregate_max_degree, noisy_degree_release, noisy_max_degree};
pub use kstar::{aggregate_sum, kstar_release, local_lap_kstar};
pub use noisy_graph::{LazyNoisyGraph, NoisyEdges, NoisyGraph};
pub use triangle::{empirical_triangle_estimate, local_rr_triangle, round1_release, triangle_coefficients};
pub use two_rounds::{
    aggregate_round2, local_2rounds_triangle, round2_counts, round2_release, Round1Mode,
    Round2Counts, Round2Noise, TwoRoundOptions, UserRound2Message,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::clustering_coefficient;
use crate::mech::PrivacyBudget;

/// Result of one protocol run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorOutput {
    pub estimate: f64,
    pub budget_spent: PrivacyBudget,
    pub rounds: u8,
    pub algorithm: &'static str,
    pub d_tilde: Option<usize>,
    /// Star size, for k-star estimators.
    pub k: Option<u32>,
}

/// Clustering coefficient assembled from a triangle and a 2-star estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClusteringEstimate {
    pub coefficient: f64,
    pub budget_spent: PrivacyBudget,
}

/// `clamp(3·triangles / two_stars, 0, 1)`; spends both inputs' budgets.
pub fn estimate_clustering(triangles: &EstimatorOutput, two_stars: &EstimatorOutput) -> Result<ClusteringEstimate> {
    if two_stars.k.is_some_and(|k| k != 2) {
        return Err(Error::invalid("clustering needs a 2-star estimate"));
    }
    Ok(ClusteringEstimate {
        coefficient: clustering_coefficient(triangles.estimate, two_stars.estimate),
        budget_spent: triangles.budget_spent + two_stars.budget_spent,
    })
}

pub(crate) fn require_positive(name: &str, eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {eps} must be positive and finite")))
    }
}
