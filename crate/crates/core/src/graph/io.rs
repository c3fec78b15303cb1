//! Whitespace-separated edge lists in the SNAP distribution format.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::Serialize;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// What happened while reading an edge list.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoadSummary {
    pub nodes: usize,
    pub edges: u64,
    pub edge_lines: u64,
    pub self_loops_dropped: u64,
    pub duplicates_dropped: u64,
    /// Whether the file's own ids were used as node indices (a
    /// `# Nodes: N` header was present and every id was below `N`).
    pub ids_preserved: bool,
    /// `2|E| / n`.
    pub mean_degree: f64,
    /// `|E| / n`, the convention some dataset descriptions call "average degree".
    pub edges_per_node: f64,
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    load_edge_list_with_summary(path).map(|(g, _)| g)
}

pub fn load_edge_list_with_summary(path: impl AsRef<Path>) -> Result<(Graph, LoadSummary)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(BufReader::new(file), path)
}

/// Parses an undirected edge list.
///
/// Lines are `u v` separated by any whitespace; blank lines and lines
/// starting with `#` are skipped. Ids are remapped to `0..n` in order of
/// first appearance, unless a SNAP `# Nodes: N` header is present and all
/// ids are already below `N`, in which case ids are kept and isolated nodes
/// survive. `origin` only labels error messages.
pub fn parse_edge_list<R: BufRead>(reader: R, origin: &Path) -> Result<(Graph, LoadSummary)> {
    let mut declared_nodes: Option<u64> = None;
    let mut raw: Vec<(u64, u64)> = Vec::new();
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| Error::Io {
            path: origin.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if declared_nodes.is_none() {
                declared_nodes = parse_nodes_header(comment);
            }
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(line_no, format!("expected two node ids, got {trimmed:?}")));
        };
        let parse_id = |s: &str| {
            s.parse::<u64>()
                .map_err(|e| parse_err(line_no, format!("bad node id {s:?}: {e}")))
        };
        raw.push((parse_id(a)?, parse_id(b)?));
    }

    let ids_preserved = match declared_nodes {
        Some(n) => n <= NodeId::MAX as u64 && raw.iter().all(|&(u, v)| u < n && v < n),
        None => false,
    };

    let (n, edges): (usize, Vec<(NodeId, NodeId)>) = if ids_preserved {
        let n = declared_nodes.unwrap_or(0) as usize;
        (n, raw.iter().map(|&(u, v)| (u as NodeId, v as NodeId)).collect())
    } else {
        let mut ids: HashMap<u64, NodeId> = HashMap::new();
        let mut dense = |id: u64| -> Result<NodeId> {
            let next = ids.len();
            if next > NodeId::MAX as usize {
                return Err(Error::invalid("more distinct node ids than fit in 32 bits"));
            }
            Ok(*ids.entry(id).or_insert(next as NodeId))
        };
        let mut edges = Vec::with_capacity(raw.len());
        for &(u, v) in &raw {
            edges.push((dense(u)?, dense(v)?));
        }
        (ids.len(), edges)
    };

    let self_loops = edges.iter().filter(|(u, v)| u == v).count() as u64;
    let edge_lines = edges.len() as u64;
    let graph = Graph::from_edges(n, edges)?;
    let per_node = |x: f64| if n == 0 { 0.0 } else { x / n as f64 };
    let summary = LoadSummary {
        nodes: n,
        edges: graph.edge_count(),
        edge_lines,
        self_loops_dropped: self_loops,
        duplicates_dropped: edge_lines - self_loops - graph.edge_count(),
        ids_preserved,
        mean_degree: per_node(2.0 * graph.edge_count() as f64),
        edges_per_node: per_node(graph.edge_count() as f64),
    };
    Ok((graph, summary))
}

/// Recognizes the SNAP header comment `Nodes: N Edges: M`.
fn parse_nodes_header(comment: &str) -> Option<u64> {
    let mut tokens = comment.split_whitespace();
    while let Some(tok) = tokens.next() {
        if tok.eq_ignore_ascii_case("nodes:") {
            return tokens.next()?.parse().ok();
        }
    }
    None
}

/// Writes `g` with a `# Nodes: N Edges: M` header and one `u v` line per
/// edge (`u < v`), so that reading it back reproduces `g` exactly.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# Undirected graph")?;
    writeln!(out, "# Nodes: {} Edges: {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u}\t{v}")?;
    }
    out.flush()
}
