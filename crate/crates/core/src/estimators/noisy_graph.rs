use crate::error::{Error, Result};
use crate::graph::{binomial, Graph, NeighborLists, NodeId, SubgraphClassCounts};
use crate::mech::{rr_bit, BitRow, Role, Stream, TrialSource};

/// Read access to the collector's published noisy graph `G'`.
pub trait NoisyEdges: Sync {
    fn num_nodes(&self) -> usize;

    /// Whether `(u, v)` is an edge of `G'`. Symmetric; `u != v`.
    fn has_edge(&self, u: usize, v: usize) -> bool;
}

/// `G'` assembled from every user's released lower-triangular row, stored
/// as a packed lower-triangular bit matrix (`n(n-1)/2` bits).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoisyGraph {
    n: usize,
    bits: Vec<u64>,
}

fn tri_index(hi: usize, lo: usize) -> usize {
    hi * (hi - 1) / 2 + lo
}

impl NoisyGraph {
    /// `rows[i]` must be user `i`'s release, of length `i`.
    pub fn from_rows(rows: &[BitRow]) -> Result<Self> {
        let n = rows.len();
        let total = n * n.saturating_sub(1) / 2;
        let mut bits = vec![0u64; total.div_ceil(64)];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {i}",
                    row.len()
                )));
            }
            for j in (0..i).filter(|&j| row.get(j)) {
                let idx = tri_index(i, j);
                bits[idx / 64] |= 1 << (idx % 64);
            }
        }
        Ok(NoisyGraph { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Symmetric rows as bitsets, `n` rows of `ceil(n/64)` words.
    fn dense_rows(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; self.n];
        for hi in 1..self.n {
            for lo in 0..hi {
                if self.has_edge(hi, lo) {
                    rows[hi][lo / 64] |= 1 << (lo % 64);
                    rows[lo][hi / 64] |= 1 << (hi % 64);
                }
            }
        }
        rows
    }

    /// Triangle, 2-edge, 1-edge and no-edge triple counts of `G'`.
    ///
    /// `G'` is dense, so triangles are counted with word-parallel
    /// intersections: for each edge `(i, j)`, `j < i`, the common
    /// neighbors below `j`.
    pub fn subgraph_classes(&self) -> Result<SubgraphClassCounts> {
        let rows = self.dense_rows();
        let mut triangles = 0u64;
        let mut two_paths: u128 = 0;
        let mut edges = 0u64;
        for i in 0..self.n {
            let ri = &rows[i];
            let degree: u64 = ri.iter().map(|w| w.count_ones() as u64).sum();
            edges += degree;
            two_paths += binomial(degree, 2).unwrap_or(0);
            for j in 0..i {
                if ri[j / 64] >> (j % 64) & 1 == 0 {
                    continue;
                }
                let rj = &rows[j];
                let full = j / 64;
                let mut common: u64 = (0..full).map(|w| (ri[w] & rj[w]).count_ones() as u64).sum();
                let partial = (1u64 << (j % 64)) - 1;
                common += (ri[full] & rj[full] & partial).count_ones() as u64;
                triangles += common;
            }
        }
        SubgraphClassCounts::from_identities(self.n as u64, edges / 2, two_paths, triangles)
    }

    pub fn to_graph(&self) -> Graph {
        let edges = (1..self.n)
            .flat_map(|hi| (0..hi).map(move |lo| (hi, lo)))
            .filter(|&(hi, lo)| self.has_edge(hi, lo))
            .map(|(hi, lo)| (hi as NodeId, lo as NodeId));
        Graph::from_edges(self.n, edges).expect("ids are in range")
    }
}

impl NoisyEdges for NoisyGraph {
    fn num_nodes(&self) -> usize {
        self.n
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u != v);
        let idx = tri_index(u.max(v), u.min(v));
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }
}

/// `G'` materialized only where queried.
///
/// Entry `(hi, lo)`, `lo < hi`, is user `hi`'s release for column `lo`,
/// decided by draw `lo` of the same stream the eager path uses, so both
/// paths see bit-identical noisy graphs.
pub struct LazyNoisyGraph<'a, U: ?Sized> {
    users: &'a U,
    eps: f64,
    keys: Option<Vec<[u8; 32]>>,
}

impl<'a, U: NeighborLists + ?Sized> LazyNoisyGraph<'a, U> {
    pub fn new(users: &'a U, eps: f64, source: &TrialSource) -> Self {
        let keys = source.rr_live().then(|| {
            (0..users.num_users())
                .map(|i| source.key(Role::RandomizedResponse, i as u64))
                .collect()
        });
        LazyNoisyGraph { users, eps, keys }
    }
}

impl<U: NeighborLists + ?Sized> NoisyEdges for LazyNoisyGraph<'_, U> {
    fn num_nodes(&self) -> usize {
        self.users.num_users()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        let (hi, lo) = (u.max(v), u.min(v));
        let bit = self.users.has_neighbor(hi, lo);
        match &self.keys {
            None => bit,
            Some(keys) => {
                let mut stream = Stream::from_key(keys[hi]);
                stream.seek_draw(lo as u64);
                rr_bit(&mut stream, self.eps, bit)
            }
        }
    }
}
