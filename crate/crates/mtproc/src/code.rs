//! Canonical codes for temporally ordered motif instances.
//!
//! A motif instance is a sequence of edges ordered by time. Its code is built
//! by relabeling nodes in order of first appearance (0, 1, 2, ...) and
//! concatenating the relabeled endpoints of every edge, rendered in the
//! base-36 alphabet `0-9a-z`. For example `(A,B), (B,C), (A,C)` encodes as
//! `011202`.
//!
//! Two properties make these codes useful as map keys:
//!
//! * **Canonical**: any injective renaming of the nodes yields the same code,
//!   so a code identifies a motif shape, not a particular set of node ids.
//! * **Prefix-closed**: the code of the first `l` edges is a prefix of the
//!   code of the first `l + 1` edges, so a growing process keeps a stable
//!   ancestry trail.
//!
//! The alphabet caps a single motif at 36 distinct nodes; exceeding it is an
//! error rather than a silent wraparound.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Node identifier in an input graph. Ids are arbitrary non-negative
/// integers; nothing assumes they are dense.
pub type NodeId = u64;

const ALPHABET: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Largest number of distinct nodes a single code can name.
pub const MAX_CODE_NODES: usize = ALPHABET.len();

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    /// A motif touched more than [`MAX_CODE_NODES`] distinct nodes.
    #[error("motif exceeds {MAX_CODE_NODES} distinct nodes; label alphabet exhausted")]
    AlphabetExhausted,
    /// An edge after the first shares no endpoint with the motif so far.
    #[error("edge ({src}, {dst}) shares no node with the motif built so far")]
    Disconnected { src: NodeId, dst: NodeId },
    /// A raw label sequence or string is not a well-formed code.
    #[error("invalid motif code: {0}")]
    InvalidCode(String),
}

/// Mapping from node ids to the labels they received, in first-appearance
/// order. The label of a node is its position in the insertion sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMap {
    nodes: Vec<NodeId>,
}

impl LabelMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of labeled nodes (equals the next fresh label).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.nodes.contains(&node)
    }

    pub fn get(&self, node: NodeId) -> Option<u8> {
        self.nodes.iter().position(|&n| n == node).map(|p| p as u8)
    }

    /// Nodes in label order, i.e. `nodes()[l]` carries label `l`.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Label for `node`, assigning the next fresh label on first sight.
    fn get_or_assign(&mut self, node: NodeId) -> Result<u8, CodeError> {
        if let Some(l) = self.get(node) {
            return Ok(l);
        }
        if self.nodes.len() >= MAX_CODE_NODES {
            return Err(CodeError::AlphabetExhausted);
        }
        self.nodes.push(node);
        Ok((self.nodes.len() - 1) as u8)
    }
}

/// Canonical code of a motif instance: one label per edge endpoint, two
/// labels per edge, in temporal order.
///
/// The derived `Ord` is lexicographic over label values, which coincides with
/// lexicographic order of the rendered base-36 string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotifCode {
    labels: Vec<u8>,
}

impl MotifCode {
    /// Validates a raw label sequence and wraps it. Enforces the full code
    /// grammar: non-empty even length, first label 0, every label at most
    /// one past the running maximum (first-appearance contiguity), and
    /// every edge after the first sharing at least one previously seen label.
    pub fn try_from_labels(labels: Vec<u8>) -> Result<Self, CodeError> {
        if labels.is_empty() {
            return Err(CodeError::InvalidCode("empty code".into()));
        }
        if !labels.len().is_multiple_of(2) {
            return Err(CodeError::InvalidCode(format!(
                "odd length {}",
                labels.len()
            )));
        }
        if labels[0] != 0 {
            return Err(CodeError::InvalidCode("first label must be 0".into()));
        }
        let mut seen_max: i32 = -1;
        for (i, &l) in labels.iter().enumerate() {
            if l as usize >= MAX_CODE_NODES {
                return Err(CodeError::InvalidCode(format!("label {l} out of range")));
            }
            if i >= 2 && i % 2 == 0 {
                // Start of a new edge: connectivity requires at least one
                // endpoint label to have appeared before this edge.
                let lo = labels[i].min(labels[i + 1]);
                if i32::from(lo) > seen_max {
                    return Err(CodeError::InvalidCode(format!(
                        "edge {} shares no label with earlier edges",
                        i / 2
                    )));
                }
            }
            if i32::from(l) > seen_max + 1 {
                return Err(CodeError::InvalidCode(format!(
                    "label {l} appears before {}",
                    seen_max + 1
                )));
            }
            seen_max = seen_max.max(i32::from(l));
        }
        Ok(Self { labels })
    }

    /// Code and label map for a fresh one-edge motif. A self-loop yields
    /// `00`, any other edge `01`.
    pub fn seed(u: NodeId, v: NodeId) -> (Self, LabelMap) {
        let mut map = LabelMap::new();
        // Two nodes never exhaust a 36-letter alphabet.
        let fu = map.get_or_assign(u).expect("fresh map");
        let fv = map.get_or_assign(v).expect("fresh map");
        (
            Self {
                labels: vec![fu, fv],
            },
            map,
        )
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Relabeled endpoint pairs in temporal order.
    pub fn edges(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        self.labels.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    /// Number of edges in the motif.
    pub fn edge_count(&self) -> usize {
        self.labels.len() / 2
    }

    /// Number of distinct nodes in the motif.
    pub fn node_count(&self) -> usize {
        1 + self.labels.iter().copied().max().unwrap_or(0) as usize
    }

    /// `(edge count, node count)`.
    pub fn arity(&self) -> (usize, usize) {
        (self.edge_count(), self.node_count())
    }

    pub fn is_prefix_of(&self, other: &MotifCode) -> bool {
        other.labels.starts_with(&self.labels)
    }
}

impl fmt::Display for MotifCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.labels {
            f.write_str(
                std::str::from_utf8(&ALPHABET[l as usize..l as usize + 1]).expect("ascii"),
            )?;
        }
        Ok(())
    }
}

impl FromStr for MotifCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut labels = Vec::with_capacity(s.len());
        for c in s.bytes() {
            let l = match c {
                b'0'..=b'9' => c - b'0',
                b'a'..=b'z' => 10 + c - b'a',
                _ => {
                    return Err(CodeError::InvalidCode(format!(
                        "character {:?} outside base-36 alphabet",
                        c as char
                    )))
                }
            };
            labels.push(l);
        }
        Self::try_from_labels(labels)
    }
}

/// Encodes one whole instance from scratch.
///
/// # Errors
///
/// [`CodeError::Disconnected`] if an edge after the first shares no node with
/// the instance so far, [`CodeError::AlphabetExhausted`] past 36 distinct
/// nodes, and an invalid-code error for an empty instance.
pub fn encode_instance(pairs: &[(NodeId, NodeId)]) -> Result<MotifCode, CodeError> {
    let Some((&first, rest)) = pairs.split_first() else {
        return Err(CodeError::InvalidCode("empty instance".into()));
    };
    let (mut code, mut map) = MotifCode::seed(first.0, first.1);
    for &(u, v) in rest {
        (code, map) = extend(code, map, u, v)?;
    }
    Ok(code)
}

/// Appends one edge to an encoded motif, assigning fresh labels in
/// first-appearance order (`u` before `v`).
///
/// # Errors
///
/// [`CodeError::Disconnected`] when neither endpoint is already labeled —
/// callers are expected to have checked adjacency — and
/// [`CodeError::AlphabetExhausted`] past 36 distinct nodes.
pub fn extend(
    mut code: MotifCode,
    mut map: LabelMap,
    u: NodeId,
    v: NodeId,
) -> Result<(MotifCode, LabelMap), CodeError> {
    if !map.contains(u) && !map.contains(v) {
        return Err(CodeError::Disconnected { src: u, dst: v });
    }
    let fu = map.get_or_assign(u)?;
    let fv = map.get_or_assign(v)?;
    code.labels.push(fu);
    code.labels.push(fv);
    Ok((code, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn code(s: &str) -> MotifCode {
        s.parse().expect("valid code")
    }

    #[test]
    fn single_edge_encodes_as_01() {
        assert_eq!(encode_instance(&[(7, 9)]).unwrap().to_string(), "01");
    }

    #[test]
    fn self_loop_first_edge_encodes_as_00() {
        assert_eq!(encode_instance(&[(5, 5)]).unwrap().to_string(), "00");
    }

    #[test]
    fn repeated_and_reciprocal_edges() {
        assert_eq!(encode_instance(&[(1, 2), (1, 2)]).unwrap().to_string(), "0101");
        assert_eq!(encode_instance(&[(1, 2), (2, 1)]).unwrap().to_string(), "0110");
    }

    #[test]
    fn triangle_encodes_as_011202() {
        let c = encode_instance(&[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(c.to_string(), "011202");
        assert_eq!(c.arity(), (3, 3));
    }

    #[test]
    fn encoding_ignores_concrete_node_ids() {
        let a = encode_instance(&[(10, 20), (20, 30), (10, 30)]).unwrap();
        let b = encode_instance(&[(900, 4), (4, 77), (900, 77)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn extend_assigns_fresh_labels_in_endpoint_order() {
        let (c, m) = MotifCode::seed(100, 200); // A=0, B=1
        let (c2, m2) = extend(c.clone(), m.clone(), 200, 300).unwrap();
        assert_eq!(c2.to_string(), "0112");
        assert_eq!(m2.get(300), Some(2));

        let (c3, _) = extend(c.clone(), m.clone(), 100, 200).unwrap();
        assert_eq!(c3.to_string(), "0101");

        // New node first in the pair takes the next label.
        let (c4, _) = extend(c.clone(), m.clone(), 300, 200).unwrap();
        assert_eq!(c4.to_string(), "0121");

        let err = extend(c, m, 300, 400).unwrap_err();
        assert_eq!(err, CodeError::Disconnected { src: 300, dst: 400 });
    }

    #[test]
    fn two_edge_universe_without_self_loops_is_exactly_six() {
        // All ways a second (non-loop) edge can touch a labeled pair {A, B},
        // with C standing in for any fresh node.
        let (a, b, c) = (1, 2, 3);
        let mut found: Vec<String> = [(a, b), (a, c), (b, a), (b, c), (c, a), (c, b)]
            .iter()
            .map(|&(u, v)| {
                let (code, map) = MotifCode::seed(a, b);
                extend(code, map, u, v).unwrap().0.to_string()
            })
            .collect();
        found.sort();
        assert_eq!(found, ["0101", "0102", "0110", "0112", "0120", "0121"]);
    }

    #[test]
    fn self_loop_second_edges_fall_outside_the_six() {
        let (code, map) = MotifCode::seed(1, 2);
        let (c1, _) = extend(code.clone(), map.clone(), 1, 1).unwrap();
        let (c2, _) = extend(code, map, 2, 2).unwrap();
        assert_eq!(c1.to_string(), "0100");
        assert_eq!(c2.to_string(), "0111");
    }

    #[test]
    fn arity_reports_edges_and_nodes() {
        assert_eq!(code("01").arity(), (1, 2));
        assert_eq!(code("0101").arity(), (2, 2));
        assert_eq!(code("011202").arity(), (3, 3));
        assert_eq!(code("00").arity(), (1, 1));
    }

    #[test]
    fn grammar_rejects_malformed_codes() {
        assert!(matches!("011".parse::<MotifCode>(), Err(CodeError::InvalidCode(_))));
        assert!(matches!("10".parse::<MotifCode>(), Err(CodeError::InvalidCode(_))));
        assert!(matches!("02".parse::<MotifCode>(), Err(CodeError::InvalidCode(_))));
        // Third edge (2,3) shares no label with {0,1}.
        assert!(matches!("012323".parse::<MotifCode>(), Err(CodeError::InvalidCode(_))));
        assert!(matches!("".parse::<MotifCode>(), Err(CodeError::InvalidCode(_))));
        assert!(matches!("01!2".parse::<MotifCode>(), Err(CodeError::InvalidCode(_))));
    }

    #[test]
    fn display_round_trips_through_parse() {
        for s in ["01", "0101", "0110", "011202", "0120", "012130", "00", "0001"] {
            assert_eq!(code(s).to_string(), s);
        }
    }

    #[test]
    fn alphabet_exhausts_past_36_nodes() {
        // A star with 37 distinct nodes: the 36th spoke needs label 36.
        let pairs: Vec<(NodeId, NodeId)> = (1..=36).map(|i| (0, i)).collect();
        assert_eq!(encode_instance(&pairs).unwrap_err(), CodeError::AlphabetExhausted);
        let ok: Vec<(NodeId, NodeId)> = (1..=35).map(|i| (0, i)).collect();
        assert_eq!(encode_instance(&ok).unwrap().node_count(), 36);
    }

    /// Strategy: a connected instance over a small node universe, where every
    /// edge after the first picks at least one endpoint among already-used
    /// nodes.
    fn connected_instance() -> impl Strategy<Value = Vec<(NodeId, NodeId)>> {
        (
            proptest::collection::vec((0u64..12, 0u64..12, any::<bool>()), 1..8),
            (0u64..12, 0u64..12),
        )
            .prop_map(|(tail, first)| {
                let mut pairs = vec![first];
                let mut seen: Vec<NodeId> = vec![first.0, first.1];
                for (a, b, swap) in tail {
                    let anchor = seen[(a as usize) % seen.len()];
                    let other = b;
                    let pair = if swap { (anchor, other) } else { (other, anchor) };
                    pairs.push(pair);
                    seen.push(other);
                }
                pairs
            })
    }

    proptest! {
        #[test]
        fn codes_are_invariant_under_injective_renaming(pairs in connected_instance(), offset in 1u64..1000) {
            // x -> x * 1009 + offset is injective on the small universe.
            let renamed: Vec<(NodeId, NodeId)> =
                pairs.iter().map(|&(u, v)| (u * 1009 + offset, v * 1009 + offset)).collect();
            prop_assert_eq!(encode_instance(&pairs).unwrap(), encode_instance(&renamed).unwrap());
        }

        #[test]
        fn every_prefix_is_the_code_of_the_prefix_instance(pairs in connected_instance()) {
            let full = encode_instance(&pairs).unwrap();
            for l in 1..=pairs.len() {
                let prefix = encode_instance(&pairs[..l]).unwrap();
                prop_assert!(prefix.is_prefix_of(&full));
            }
        }

        #[test]
        fn emitted_codes_pass_the_grammar(pairs in connected_instance()) {
            let code = encode_instance(&pairs).unwrap();
            // Re-validate the raw labels through the grammar entry point.
            let revalidated = MotifCode::try_from_labels(code.labels().to_vec()).unwrap();
            prop_assert_eq!(code, revalidated);
        }
    }
}
