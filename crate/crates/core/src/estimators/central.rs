use std::borrow::Cow;

use super::kstar::kstar_sensitivity;
use super::{require_positive, EstimatorOutput};
use crate::error::Result;
use crate::graph::{count_kstars, count_triangles, max_degree, project, Graph, NodeId};
use crate::mech::{laplace, PrivacyBudget, Role, TrialSource};

/// Centralized projection: every node truncates its list to `d_tilde`, and
/// an edge survives only if both endpoints kept it, so the result is a
/// simple graph with maximum degree at most `d_tilde`.
pub fn project_graph<'g>(g: &'g Graph, d_tilde: usize, source: &TrialSource) -> Cow<'g, Graph> {
    if max_degree(g) <= d_tilde {
        return Cow::Borrowed(g);
    }
    let kept: Vec<Vec<NodeId>> = (0..g.n())
        .map(|i| {
            let mut stream = source.stream(Role::Projection, i as u64);
            project(&g.neighbor_list(i), d_tilde, &mut stream).neighbors().to_vec()
        })
        .collect();
    let edges = (0..g.n()).flat_map(|u| {
        let kept = &kept;
        kept[u]
            .iter()
            .filter(move |&&v| (v as usize) > u && kept[v as usize].binary_search(&(u as NodeId)).is_ok())
            .map(move |&v| (u as NodeId, v))
    });
    Cow::Owned(Graph::from_edges(g.n(), edges).expect("projected ids stay in range"))
}

/// Exact k-stars of the projected graph plus `Lap(2·C(d_tilde, k-1) / eps)`.
pub fn central_lap_kstar(g: &Graph, eps: f64, d_tilde: usize, k: u32, source: &TrialSource) -> Result<EstimatorOutput> {
    require_positive("eps", eps)?;
    let scale = 2.0 * kstar_sensitivity(d_tilde, k)? / eps;
    let exact = count_kstars(&project_graph(g, d_tilde, source), k)?;
    let noise = laplace(&mut source.stream(Role::CentralNoise, 0), scale)?;
    Ok(EstimatorOutput {
        estimate: exact as f64 + noise,
        budget_spent: PrivacyBudget::laplace(eps),
        rounds: 1,
        algorithm: "central-lap-kstar",
        d_tilde: Some(d_tilde),
        k: Some(k),
    })
}

/// Exact triangles of the projected graph plus `Lap(d_tilde / eps)`.
pub fn central_lap_triangle(g: &Graph, eps: f64, d_tilde: usize, source: &TrialSource) -> Result<EstimatorOutput> {
    require_positive("eps", eps)?;
    let exact = count_triangles(&project_graph(g, d_tilde, source));
    let noise = laplace(&mut source.stream(Role::CentralNoise, 0), d_tilde as f64 / eps)?;
    Ok(EstimatorOutput {
        estimate: exact as f64 + noise,
        budget_spent: PrivacyBudget::laplace(eps),
        rounds: 1,
        algorithm: "central-lap-tri",
        d_tilde: Some(d_tilde),
        k: None,
    })
}
