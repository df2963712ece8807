//! Temporal edge lists: the input model, parsing, canonical ordering,
//! serialization, and seeded random generation.
//!
//! An edge is `(src, dst, t, seq)` where `t` is an integer timestamp in
//! seconds and `seq` is the input ordinal that breaks timestamp ties. The
//! canonical order used everywhere downstream is `(t, seq)`; it is total
//! because `seq` is unique, so every consumer sees one well-defined stream.
//! Self-loops and parallel edges are data, not errors, and node ids are kept
//! as-is (no dense re-mapping).

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::code::NodeId;

/// Integer timestamp in seconds. Inputs are non-negative; the signed type
/// keeps gap arithmetic (`t - t_last`) overflow-free and unambiguous.
pub type Timestamp = i64;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// One directed temporal edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemporalEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub t: Timestamp,
    /// Input ordinal; unique, used to break timestamp ties deterministically.
    pub seq: u64,
}

/// An edge list held in canonical `(t, seq)` order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemporalGraph {
    edges: Vec<TemporalEdge>,
    node_count: usize,
}

impl TemporalGraph {
    /// Builds a graph from edges in any order; sorts them canonically.
    pub fn from_edges(edges: Vec<TemporalEdge>) -> Self {
        let edges = sort_canonical(edges);
        let node_count = distinct_nodes(&edges);
        Self { edges, node_count }
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of distinct node ids appearing as an endpoint.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Earliest timestamp; `None` for an empty graph.
    pub fn t_min(&self) -> Option<Timestamp> {
        self.edges.first().map(|e| e.t)
    }

    /// Latest timestamp; `None` for an empty graph.
    pub fn t_max(&self) -> Option<Timestamp> {
        self.edges.last().map(|e| e.t)
    }
}

fn distinct_nodes(edges: &[TemporalEdge]) -> usize {
    let mut nodes: HashSet<NodeId> = HashSet::with_capacity(edges.len());
    for e in edges {
        nodes.insert(e.src);
        nodes.insert(e.dst);
    }
    nodes.len()
}

/// Stable sort into canonical `(t, seq)` order.
pub fn sort_canonical(mut edges: Vec<TemporalEdge>) -> Vec<TemporalEdge> {
    edges.sort_by_key(|e| (e.t, e.seq));
    edges
}

/// Result of parsing an edge-list stream.
#[derive(Debug)]
pub struct ParseOutcome {
    pub graph: TemporalGraph,
    /// Malformed lines skipped in non-strict mode (always 0 in strict mode).
    pub skipped: usize,
}

/// Parses a whitespace-separated `src dst t` stream.
///
/// Lines starting with `#` or `%` and blank lines are ignored. Each accepted
/// edge gets `seq` equal to its 0-based acceptance index. In strict mode a
/// malformed line aborts with an error naming the 1-based line number; in
/// non-strict mode malformed lines are skipped and counted.
pub fn parse_edge_list(reader: impl BufRead, strict: bool) -> Result<ParseOutcome, GraphError> {
    let mut edges = Vec::new();
    let mut skipped = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') || text.starts_with('%') {
            continue;
        }
        match parse_line(text) {
            Ok((src, dst, t)) => {
                let seq = edges.len() as u64;
                edges.push(TemporalEdge { src, dst, t, seq });
            }
            Err(reason) => {
                if strict {
                    return Err(GraphError::Malformed {
                        line: idx + 1,
                        reason,
                    });
                }
                skipped += 1;
            }
        }
    }
    Ok(ParseOutcome {
        graph: TemporalGraph::from_edges(edges),
        skipped,
    })
}

fn parse_line(text: &str) -> Result<(NodeId, NodeId, Timestamp), String> {
    let mut fields = text.split_whitespace();
    let (Some(a), Some(b), Some(c), None) =
        (fields.next(), fields.next(), fields.next(), fields.next())
    else {
        return Err(format!(
            "expected 3 fields `src dst t`, got {}",
            text.split_whitespace().count()
        ));
    };
    let src: NodeId = a.parse().map_err(|_| format!("bad node id `{a}`"))?;
    let dst: NodeId = b.parse().map_err(|_| format!("bad node id `{b}`"))?;
    let t: Timestamp = c.parse().map_err(|_| format!("bad timestamp `{c}`"))?;
    if t < 0 {
        return Err(format!("negative timestamp `{c}`"));
    }
    Ok((src, dst, t))
}

/// Writes the graph as `src<TAB>dst<TAB>t` lines in canonical order.
pub fn serialize_edges(graph: &TemporalGraph, mut w: impl Write) -> io::Result<()> {
    for e in graph.edges() {
        writeln!(w, "{}\t{}\t{}", e.src, e.dst, e.t)?;
    }
    Ok(())
}

/// Parameters for [`gen_uniform`].
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub nodes: u64,
    pub edges: u64,
    /// Timestamps are drawn uniformly from `[0, span)`.
    pub span: Timestamp,
    pub seed: u64,
    pub self_loops: bool,
}

/// Generates a seed-deterministic random graph: endpoints uniform over
/// `0..nodes` (redrawing `dst` while it equals `src` unless self-loops were
/// requested), timestamps uniform over `[0, span)`.
///
/// Uses a ChaCha generator, so identical seeds reproduce identical graphs
/// across platforms and releases.
pub fn gen_uniform(spec: &GenSpec) -> Result<TemporalGraph, GraphError> {
    if spec.nodes < 2 {
        return Err(GraphError::InvalidArgument("need at least 2 nodes"));
    }
    if spec.span < 1 {
        return Err(GraphError::InvalidArgument("span must be at least 1"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::with_capacity(spec.edges as usize);
    for seq in 0..spec.edges {
        let src = rng.random_range(0..spec.nodes);
        let dst = loop {
            let d = rng.random_range(0..spec.nodes);
            if spec.self_loops || d != src {
                break d;
            }
        };
        let t = rng.random_range(0..spec.span);
        edges.push(TemporalEdge { src, dst, t, seq });
    }
    Ok(TemporalGraph::from_edges(edges))
}
