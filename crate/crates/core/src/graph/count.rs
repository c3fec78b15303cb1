use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// `C(n, k)` in 128 bits, `None` on overflow. `C(n, k) = 0` when `n < k`.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) because acc = C(n, i).
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Number of triangles, counted once per unordered triple.
///
/// Each triangle `u < v < w` is found from its lowest edge `(u, v)` by
/// intersecting the sorted tails of both neighbor lists above `v`.
pub fn count_triangles(g: &Graph) -> u64 {
    let mut total = 0u64;
    for u in 0..g.n() {
        let nu = g.neighbors(u);
        let above_u = nu.partition_point(|&x| (x as usize) <= u);
        for (offset, &v) in nu[above_u..].iter().enumerate() {
            let tail_u = &nu[above_u + offset + 1..];
            let nv = g.neighbors(v as usize);
            let tail_v = &nv[nv.partition_point(|&x| x <= v)..];
            total += sorted_intersection_len(tail_u, tail_v);
        }
    }
    total
}

pub(crate) fn sorted_intersection_len(a: &[NodeId], b: &[NodeId]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// `Σ_i C(d_i, k)`.
pub fn count_kstars(g: &Graph, k: u32) -> Result<u128> {
    kstars_from_degrees((0..g.n()).map(|i| g.degree(i)), k)
}

pub(crate) fn kstars_from_degrees(degrees: impl Iterator<Item = usize>, k: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::invalid("k-star size must be at least 1"));
    }
    let mut total: u128 = 0;
    for d in degrees {
        let term = binomial(d as u64, k as u64)
            .ok_or_else(|| Error::Overflow(format!("C({d}, {k}) exceeds 128 bits")))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::Overflow(format!("sum of C(d_i, {k}) exceeds 128 bits")))?;
    }
    Ok(total)
}

pub fn max_degree(g: &Graph) -> usize {
    (0..g.n()).map(|i| g.degree(i)).max().unwrap_or(0)
}

/// `3·triangles / two_stars`, clamped to `[0, 1]`; 0 when `two_stars <= 0`.
pub fn clustering_coefficient(triangles: f64, two_stars: f64) -> f64 {
    if two_stars.is_nan() || two_stars <= 0.0 {
        return 0.0;
    }
    let cc = 3.0 * triangles / two_stars;
    if cc.is_nan() {
        0.0
    } else {
        cc.clamp(0.0, 1.0)
    }
}

/// Node triples classified by how many of their three pairs are edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SubgraphClassCounts {
    pub m3: u64,
    pub m2: u64,
    pub m1: u64,
    pub m0: u64,
}

impl SubgraphClassCounts {
    /// Derives all four classes from the triangle count, the number of
    /// 2-paths `Σ_i C(d_i, 2)`, and the edge count.
    ///
    /// A 2-path lies in exactly one triple; a triangle contains three of
    /// them and a 2-edge triple one. An edge lies in `n - 2` triples.
    pub fn from_identities(n: u64, edges: u64, two_paths: u128, triangles: u64) -> Result<Self> {
        let overflow = || Error::Overflow("subgraph class counts exceed 64 bits".into());
        let n = n as i128;
        let m3 = triangles as i128;
        let m2 = two_paths as i128 - 3 * m3;
        let m1 = edges as i128 * (n - 2).max(0) - 2 * m2 - 3 * m3;
        let total = binomial(n as u64, 3).ok_or_else(overflow)? as i128;
        let m0 = total - m3 - m2 - m1;
        if m2 < 0 || m1 < 0 || m0 < 0 {
            return Err(Error::invalid("inconsistent triangle / 2-path / edge counts"));
        }
        let cast = |x: i128| u64::try_from(x).map_err(|_| overflow());
        Ok(SubgraphClassCounts {
            m3: cast(m3)?,
            m2: cast(m2)?,
            m1: cast(m1)?,
            m0: cast(m0)?,
        })
    }

    pub fn total(&self) -> u128 {
        self.m3 as u128 + self.m2 as u128 + self.m1 as u128 + self.m0 as u128
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.m3, self.m2, self.m1, self.m0]
    }
}

pub fn count_subgraph_classes(g: &Graph) -> Result<SubgraphClassCounts> {
    let two_paths = count_kstars(g, 2)?;
    SubgraphClassCounts::from_identities(
        g.n() as u64,
        g.edge_count(),
        two_paths,
        count_triangles(g),
    )
}
