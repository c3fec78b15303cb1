//! Ground-truth graphs, neighbor lists and exact (non-private) counting.

mod count;
mod generate;
mod io;
mod project;

pub use count::{
    binomial, clustering_coefficient, count_kstars, count_subgraph_classes, count_triangles,
    max_degree, SubgraphClassCounts,
};
pub use generate::{generate_er, sample_induced};
pub use io::{load_edge_list, load_edge_list_with_summary, parse_edge_list, write_edge_list, LoadSummary};
pub use project::{project, project_with_order};

use crate::error::{Error, Result};

pub type NodeId = u32;

/// Immutable undirected simple graph stored as sorted neighbor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: u64,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|i| (0..n as NodeId).filter(|&j| j as usize != i).collect())
            .collect();
        Graph {
            adjacency,
            edge_count: (n as u64) * (n as u64).saturating_sub(1) / 2,
        }
    }

    /// Builds a graph from undirected edges. Self-loops and repeated edges
    /// are dropped; an endpoint `>= n` is an error.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if n > NodeId::MAX as usize {
            return Err(Error::invalid(format!("{n} nodes exceed the 32-bit id space")));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                continue;
            }
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        Ok(Self::from_unsorted_adjacency(adjacency))
    }

    /// Takes symmetric (possibly unsorted, possibly duplicated) adjacency.
    pub(crate) fn from_unsorted_adjacency(mut adjacency: Vec<Vec<NodeId>>) -> Self {
        let mut degree_sum = 0u64;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len() as u64;
        }
        Graph {
            adjacency,
            edge_count: degree_sum / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn neighbors(&self, node: usize) -> &[NodeId] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as NodeId)).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| (v as usize) <= u);
            list[start..].iter().map(move |&v| (u as NodeId, v))
        })
    }

    /// User `node`'s private row of the adjacency matrix.
    pub fn neighbor_list(&self, node: usize) -> NeighborList {
        NeighborList {
            owner: node as NodeId,
            n: self.n() as NodeId,
            neighbors: self.adjacency[node].clone(),
        }
    }

    /// Checks symmetry, absence of self-loops and duplicates, and the
    /// degree-sum identity.
    pub fn validate(&self) -> Result<()> {
        let mut degree_sum = 0u64;
        for (u, list) in self.adjacency.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("row {u} is not strictly increasing")));
            }
            for &v in list {
                if v as usize == u {
                    return Err(Error::invalid(format!("self-loop at {u}")));
                }
                if v as usize >= self.n() || !self.has_edge(v as usize, u) {
                    return Err(Error::invalid(format!("edge ({u}, {v}) is not symmetric")));
                }
            }
            degree_sum += list.len() as u64;
        }
        if degree_sum != 2 * self.edge_count {
            return Err(Error::invalid("degree sum differs from twice the edge count"));
        }
        Ok(())
    }
}

/// One user's row `a_i` of the adjacency matrix, as the sorted set of
/// columns holding a 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborList {
    owner: NodeId,
    n: NodeId,
    neighbors: Vec<NodeId>,
}

impl NeighborList {
    pub fn new(owner: usize, n: usize, mut neighbors: Vec<NodeId>) -> Result<Self> {
        if owner >= n {
            return Err(Error::invalid(format!("owner {owner} outside 0..{n}")));
        }
        neighbors.sort_unstable();
        neighbors.dedup();
        if neighbors.binary_search(&(owner as NodeId)).is_ok() {
            return Err(Error::invalid(format!("neighbor list of {owner} contains itself")));
        }
        if neighbors.last().is_some_and(|&v| v as usize >= n) {
            return Err(Error::invalid(format!("neighbor of {owner} outside 0..{n}")));
        }
        Ok(NeighborList {
            owner: owner as NodeId,
            n: n as NodeId,
            neighbors,
        })
    }

    /// From a 0/1 indicator row of length `n`.
    pub fn from_indicator(owner: usize, row: &[u8]) -> Result<Self> {
        let neighbors = row
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(j, _)| j as NodeId)
            .collect();
        Self::new(owner, row.len(), neighbors)
    }

    pub fn owner(&self) -> usize {
        self.owner as usize
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn neighbors(&self) -> &[NodeId] {
        &self.neighbors
    }

    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.neighbors.binary_search(&(node as NodeId)).is_ok()
    }

    /// Neighbors with a smaller index than the owner.
    pub fn lower(&self) -> &[NodeId] {
        let end = self.neighbors.partition_point(|&v| v < self.owner);
        &self.neighbors[..end]
    }

    pub fn to_indicator(&self) -> Vec<u8> {
        let mut row = vec![0u8; self.n()];
        for &v in &self.neighbors {
            row[v as usize] = 1;
        }
        row
    }

    pub(crate) fn with_neighbors(&self, neighbors: Vec<NodeId>) -> Self {
        NeighborList {
            owner: self.owner,
            n: self.n,
            neighbors,
        }
    }
}

/// The distributed view of a graph: each user can read its own row and
/// nothing else. User-side randomizers are handed exactly one row.
pub trait NeighborLists: Sync {
    fn num_users(&self) -> usize;

    fn neighbor_list(&self, user: usize) -> NeighborList;

    /// `a_{user, column}`. Used when a single released bit is materialized
    /// on demand on behalf of `user`.
    fn has_neighbor(&self, user: usize, column: usize) -> bool {
        self.neighbor_list(user).contains(column)
    }
}

impl NeighborLists for Graph {
    fn num_users(&self) -> usize {
        self.n()
    }

    fn neighbor_list(&self, user: usize) -> NeighborList {
        Graph::neighbor_list(self, user)
    }

    fn has_neighbor(&self, user: usize, column: usize) -> bool {
        self.has_edge(user, column)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_drops_loops_and_duplicates() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        g.validate().unwrap();
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn complete_graph_edges() {
        let g = Graph::complete(5);
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.edges().count(), 10);
        assert!(g.edges().all(|(u, v)| u < v));
        g.validate().unwrap();
    }

    #[test]
    fn neighbor_list_invariants() {
        assert!(NeighborList::new(1, 4, vec![1, 2]).is_err());
        assert!(NeighborList::new(1, 4, vec![4]).is_err());
        assert!(NeighborList::new(4, 4, vec![]).is_err());
        let a = NeighborList::new(2, 5, vec![4, 0, 1, 4]).unwrap();
        assert_eq!(a.neighbors(), &[0, 1, 4]);
        assert_eq!(a.lower(), &[0, 1]);
        assert_eq!(a.to_indicator(), vec![1, 1, 0, 0, 1]);
        assert_eq!(NeighborList::from_indicator(2, &a.to_indicator()).unwrap(), a);
    }
}
