//! Shared fixtures for the integration suites: an independent brute-force
//! discovery oracle and the worked two-zone ledger graph.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mtproc::engine::TransitionStats;
use mtproc::graph::{TemporalEdge, TemporalGraph, Timestamp};

/// Order-independent, string-keyed view of discovery statistics, used to
/// compare engine output against the oracle.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct FlatStats {
    /// (parent, child) -> (count, dwell sum).
    pub transitions: BTreeMap<(String, String), (u64, u64)>,
    pub terminals: BTreeMap<String, u64>,
    pub observed: BTreeMap<String, u64>,
}

pub fn flatten(stats: &TransitionStats) -> FlatStats {
    let mut flat = FlatStats::default();
    for ((p, c), tally) in &stats.transitions {
        flat.transitions
            .insert((p.to_string(), c.to_string()), (tally.count, tally.dwell_sum));
    }
    for (c, n) in &stats.terminals {
        flat.terminals.insert(c.to_string(), *n);
    }
    for (c, n) in &stats.observed {
        flat.observed.insert(c.to_string(), *n);
    }
    flat
}

/// Renders a chain of edges as a first-appearance label string. Written
/// from scratch (position-indexed lookup, no shared code with the library)
/// so the oracle stays an independent derivation.
fn render_chain(edges: &[TemporalEdge], members: &[usize]) -> String {
    const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";
    let mut seen: Vec<u64> = Vec::new();
    let mut s = String::new();
    for &i in members {
        for node in [edges[i].src, edges[i].dst] {
            let label = match seen.iter().position(|n| *n == node) {
                Some(at) => at,
                None => {
                    seen.push(node);
                    seen.len() - 1
                }
            };
            s.push(DIGITS[label] as char);
        }
    }
    s
}

/// The chain of codes one origin edge produces, with the dwell seconds of
/// each step (the first entry is the spawn, dwell 0): repeatedly scan the
/// full edge list for the earliest edge that is strictly later than the
/// chain's last timestamp, within `delta` of it, and sharing a node with
/// the chain; stop at `l_max` edges or when no such edge exists.
pub fn oracle_chain(
    edges: &[TemporalEdge],
    origin: usize,
    delta: Timestamp,
    l_max: usize,
) -> Vec<(String, u64)> {
    let mut members = vec![origin];
    let mut nodes = vec![edges[origin].src, edges[origin].dst];
    let mut t_last = edges[origin].t;
    let mut chain = vec![(render_chain(edges, &members), 0)];

    while members.len() < l_max {
        let mut next = None;
        for (j, e) in edges.iter().enumerate() {
            if e.t <= t_last {
                continue;
            }
            if e.t - t_last > delta {
                break; // canonical order: nothing later can qualify
            }
            if nodes.contains(&e.src) || nodes.contains(&e.dst) {
                next = Some(j);
                break;
            }
        }
        let Some(j) = next else { break };
        members.push(j);
        nodes.push(edges[j].src);
        nodes.push(edges[j].dst);
        chain.push((render_chain(edges, &members), (edges[j].t - t_last) as u64));
        t_last = edges[j].t;
    }
    chain
}

/// Exhaustive reference implementation of process discovery, one
/// [`oracle_chain`] per origin edge folded into flat statistics. Quadratic
/// and allocation-happy on purpose — it exists to disagree with the engine,
/// not to be fast.
pub fn oracle_discover(edges: &[TemporalEdge], delta: Timestamp, l_max: usize) -> FlatStats {
    assert!(delta > 0 && l_max >= 1);
    let mut flat = FlatStats::default();
    for origin in 0..edges.len() {
        let chain = oracle_chain(edges, origin, delta, l_max);
        *flat.observed.entry(chain[0].0.clone()).or_default() += 1;
        for step in chain.windows(2) {
            let (parent, _) = &step[0];
            let (child, dwell) = &step[1];
            let slot = flat
                .transitions
                .entry((parent.clone(), child.clone()))
                .or_default();
            slot.0 += 1;
            slot.1 += dwell;
            *flat.observed.entry(child.clone()).or_default() += 1;
        }
        *flat.terminals.entry(chain.last().unwrap().0.clone()).or_default() += 1;
    }
    flat
}

pub fn graph_of(raw: &[(u64, u64, Timestamp)]) -> TemporalGraph {
    TemporalGraph::from_edges(
        raw.iter()
            .enumerate()
            .map(|(i, &(src, dst, t))| TemporalEdge { src, dst, t, seq: i as u64 })
            .collect(),
    )
}

/// The worked two-zone instance: 21 edges in eight node-disjoint clusters
/// spanning 1:00–16:00, built so that with delta = 3600 s, l_max = 3,
/// omega = 3 the partition is G_1 = [3600, 36000), B_1 = [25200, 36000),
/// G_2 = [25200, 57601) and the per-zone terminal ledger exercises both a
/// duplicated boundary-origin process and zone-straddling chains.
pub fn zone_ledger_graph() -> TemporalGraph {
    graph_of(&[
        // cluster A: a two-edge path that stops at "0112"
        (0, 1, 3600),
        (1, 2, 4200),
        // cluster B: triangle -> "011202", with sub-processes "0121", "01"
        (3, 4, 8000),
        (4, 5, 8600),
        (3, 5, 9200),
        // cluster C: wedge with a repeated edge -> "012121", "0101"
        (6, 7, 12000),
        (8, 7, 12700),
        (8, 7, 13400),
        // cluster D: boundary-origin two-edge path (starts inside B_1)
        (9, 10, 27000),
        (10, 11, 27600),
        // cluster E: out-star inside B_1 -> "011213", "0102"
        (12, 13, 30000),
        (13, 14, 30700),
        (13, 15, 31400),
        // cluster F: in-star in G_2 -> "010232", "0121"
        (16, 17, 40000),
        (16, 18, 40700),
        (19, 18, 41400),
        // cluster G: wedge plus detached edge -> "012130"
        (20, 21, 45000),
        (22, 21, 45600),
        (23, 20, 46200),
        // cluster H: repeated edge pinning t_max -> "0101"
        (24, 25, 57000),
        (24, 25, 57600),
    ])
}

/// Terminal counts the whole-graph run must produce on
/// [`zone_ledger_graph`] — the merged ledger column.
pub fn ledger_merged_terminals() -> BTreeMap<String, u64> {
    [
        ("01", 9),
        ("0101", 2),
        ("0102", 1),
        ("010232", 1),
        ("0112", 2),
        ("011202", 1),
        ("011213", 1),
        ("0121", 2),
        ("012121", 1),
        ("012130", 1),
    ]
    .into_iter()
    .map(|(c, n)| (c.to_string(), n))
    .collect()
}
