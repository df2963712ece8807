//! Sequential discovery of motif transition processes over one time window.
//!
//! Every edge spawns a one-edge candidate process. A candidate at size `l`
//! with last edge time `t_last` is extended by the earliest later edge that
//! shares a node with it and arrives within the gap bound: `t > t_last` and
//! `t - t_last <= delta` (inclusive). Extension consumes the candidate and
//! replaces it with the grown one, so each process follows exactly one chain
//! and terminates exactly once — either at the size cap `l_max` or when the
//! gap bound expires (including the end of the window). The window scan is a
//! single pass over edges in canonical `(t, seq)` order:
//!
//! 1. **expire** candidates whose gap to the arriving edge exceeds `delta`,
//! 2. **transit** every adjacent, in-gap candidate through the edge,
//! 3. **spawn** the edge itself as a fresh candidate.
//!
//! One edge may extend many distinct candidates at once; candidates never
//! interact with each other, which is what makes windowed runs over
//! overlapping zones cancel exactly under the signed merge in
//! [`crate::parallel`].

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::code::{extend, CodeError, LabelMap, MotifCode, NodeId};
use crate::graph::{TemporalEdge, Timestamp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("edges not in canonical (t, seq) order at index {0}")]
    UnsortedInput(usize),
    #[error("edge timestamp {t} is not below the window end {t_end}")]
    EdgeBeyondWindow { t: Timestamp, t_end: Timestamp },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// A live, still-growing motif process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateProcess {
    pub code: MotifCode,
    /// Node-to-label assignment; its domain is the member node set used for
    /// adjacency checks.
    pub labels: LabelMap,
    /// Timestamp of the most recent edge.
    pub t_last: Timestamp,
}

impl CandidateProcess {
    pub fn edge_count(&self) -> usize {
        self.code.edge_count()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.labels.contains(node)
    }
}

/// Count and dwell-time sum for one (parent, child) transition. The dwell
/// sample count always equals `count`: every recorded transition contributes
/// exactly one gap sample.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransitionTally {
    pub count: u64,
    /// Sum of `t_new - t_last` gaps in seconds.
    pub dwell_sum: u64,
}

/// Aggregated statistics of one discovery run (or a signed merge of runs).
///
/// Conservation invariants, for stats produced by a single window:
/// * every spawned process ends in exactly one terminal, so terminal counts
///   sum to the number of edges processed;
/// * `observed(c) = terminals(c) + sum over children of transitions(c -> ·)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransitionStats {
    /// (parent code, child code) -> count and dwell sum.
    pub transitions: HashMap<(MotifCode, MotifCode), TransitionTally>,
    /// Code -> how many processes terminated with exactly that motif.
    pub terminals: HashMap<MotifCode, u64>,
    /// Code -> how many processes ever reached that motif.
    pub observed: HashMap<MotifCode, u64>,
}

impl TransitionStats {
    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty() && self.terminals.is_empty() && self.observed.is_empty()
    }

    pub fn transition_count(&self, parent: &MotifCode, child: &MotifCode) -> u64 {
        self.transitions
            .get(&(parent.clone(), child.clone()))
            .map_or(0, |t| t.count)
    }

    pub fn terminal_count(&self, code: &MotifCode) -> u64 {
        self.terminals.get(code).copied().unwrap_or(0)
    }

    pub fn observed_count(&self, code: &MotifCode) -> u64 {
        self.observed.get(code).copied().unwrap_or(0)
    }

    /// Mean dwell in seconds for one transition, if it was ever taken.
    pub fn mean_dwell(&self, parent: &MotifCode, child: &MotifCode) -> Option<f64> {
        self.transitions
            .get(&(parent.clone(), child.clone()))
            .filter(|t| t.count > 0)
            .map(|t| t.dwell_sum as f64 / t.count as f64)
    }

    /// Checks the per-code conservation identities; returns the first
    /// violated one. Only meaningful for single-window stats (signed merges
    /// of partial windows satisfy them too, but only after the merge).
    pub fn check_conservation(&self) -> Result<(), String> {
        let mut outgoing: HashMap<&MotifCode, u64> = HashMap::new();
        for ((parent, _), tally) in &self.transitions {
            *outgoing.entry(parent).or_default() += tally.count;
        }
        for (code, &seen) in &self.observed {
            let out = outgoing.get(code).copied().unwrap_or(0);
            let term = self.terminal_count(code);
            if seen != out + term {
                return Err(format!(
                    "observed({code}) = {seen} but terminals + outgoing = {}",
                    out + term
                ));
            }
        }
        for code in self.terminals.keys() {
            if !self.observed.contains_key(code) {
                return Err(format!("terminal code {code} never observed"));
            }
        }
        for (parent, child) in self.transitions.keys() {
            if !self.observed.contains_key(child) {
                return Err(format!("transition target {child} never observed"));
            }
            if !parent.is_prefix_of(child) {
                return Err(format!("transition {parent} -> {child} breaks prefix growth"));
            }
        }
        Ok(())
    }

    fn record_transition(&mut self, parent: MotifCode, child: MotifCode, dwell: u64) {
        let tally = self.transitions.entry((parent, child)).or_default();
        tally.count += 1;
        tally.dwell_sum += dwell;
    }

    fn record_terminal(&mut self, code: MotifCode) {
        *self.terminals.entry(code).or_default() += 1;
    }

    fn record_observed(&mut self, code: MotifCode) {
        *self.observed.entry(code).or_default() += 1;
    }
}

// === Active candidate bookkeeping ===========================================

/// Stable reference to a slab slot; the generation tag invalidates handles
/// left behind in the per-node index and the expiry queue after a slot is
/// freed and reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Handle {
    idx: u32,
    gen: u32,
}

#[derive(Debug, Default)]
struct Slot {
    gen: u32,
    cand: Option<CandidateProcess>,
}

/// The set of live candidates, indexed two ways: by member node for
/// adjacency scans, and by a FIFO expiry queue. Candidates acquire their
/// `t_last` from the edge being processed, which is non-decreasing, so the
/// expiry queue stays sorted by construction. Both indexes tolerate stale
/// handles (consumed candidates) and drop them lazily.
#[derive(Debug, Default)]
pub struct ActiveSet {
    slots: Vec<Slot>,
    free: Vec<u32>,
    by_node: HashMap<NodeId, Vec<Handle>>,
    expiry: VecDeque<Handle>,
    live: usize,
    peak_live: usize,
}

impl ActiveSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Highest number of simultaneously live candidates seen so far.
    pub fn peak_live(&self) -> usize {
        self.peak_live
    }

    fn insert(&mut self, cand: CandidateProcess) {
        let idx = match self.free.pop() {
            Some(idx) => idx,
            None => {
                self.slots.push(Slot::default());
                (self.slots.len() - 1) as u32
            }
        };
        let slot = &mut self.slots[idx as usize];
        let handle = Handle { idx, gen: slot.gen };
        for &node in cand.labels.nodes() {
            self.by_node.entry(node).or_default().push(handle);
        }
        slot.cand = Some(cand);
        self.expiry.push_back(handle);
        self.live += 1;
        self.peak_live = self.peak_live.max(self.live);
    }

    fn get(&self, h: Handle) -> Option<&CandidateProcess> {
        let slot = self.slots.get(h.idx as usize)?;
        if slot.gen != h.gen {
            return None;
        }
        slot.cand.as_ref()
    }

    fn remove(&mut self, h: Handle) -> Option<CandidateProcess> {
        let slot = self.slots.get_mut(h.idx as usize)?;
        if slot.gen != h.gen {
            return None;
        }
        let cand = slot.cand.take()?;
        slot.gen = slot.gen.wrapping_add(1);
        self.free.push(h.idx);
        self.live -= 1;
        Some(cand)
    }

    /// Retires every candidate whose last edge is older than `cutoff`,
    /// passing it to `retire`. Relies on the FIFO queue being sorted by
    /// `t_last`.
    fn expire_before(&mut self, cutoff: Timestamp, mut retire: impl FnMut(CandidateProcess)) {
        while let Some(&h) = self.expiry.front() {
            match self.get(h) {
                None => {
                    self.expiry.pop_front();
                }
                Some(c) if c.t_last < cutoff => {
                    self.expiry.pop_front();
                    let cand = self.remove(h).expect("live candidate");
                    retire(cand);
                }
                Some(_) => break,
            }
        }
    }

    /// Drains all remaining candidates (window end).
    fn drain(&mut self, mut retire: impl FnMut(CandidateProcess)) {
        while let Some(h) = self.expiry.pop_front() {
            if let Some(cand) = self.remove(h) {
                retire(cand);
            }
        }
        debug_assert_eq!(self.live, 0);
    }

    /// Collects live candidates containing `node` that satisfy `eligible`,
    /// compacting stale index entries on the way. `skip_if_contains` filters
    /// out candidates already collected through the edge's other endpoint.
    fn matches_at(
        &mut self,
        node: NodeId,
        skip_if_contains: Option<NodeId>,
        eligible: impl Fn(&CandidateProcess) -> bool,
        out: &mut Vec<Handle>,
    ) {
        let Some(handles) = self.by_node.get_mut(&node) else {
            return;
        };
        let mut i = 0;
        while i < handles.len() {
            let h = handles[i];
            let slot = &self.slots[h.idx as usize];
            let valid = slot.gen == h.gen && slot.cand.is_some();
            if !valid {
                handles.swap_remove(i);
                continue;
            }
            let cand = slot.cand.as_ref().expect("checked");
            let duplicate = skip_if_contains.is_some_and(|other| cand.contains(other));
            if !duplicate && eligible(cand) {
                out.push(h);
            }
            i += 1;
        }
        if handles.is_empty() {
            self.by_node.remove(&node);
        }
    }
}

// === Discovery ==============================================================

/// One extension produced by [`try_to_transit`]: the consumed candidate's
/// code, the grown replacement, and the gap that was crossed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transit {
    pub parent: MotifCode,
    pub child: CandidateProcess,
    pub dwell: u64,
}

/// Extends every eligible candidate through `e`: the candidate must share a
/// node with the edge, the edge must be strictly later than the candidate's
/// last edge, the gap must be within `delta` (inclusive), and the candidate
/// must still be below `l_max` edges. Matched candidates are consumed from
/// `active` and returned grown by one edge; counters are the caller's job.
pub fn try_to_transit(
    e: &TemporalEdge,
    delta: Timestamp,
    l_max: usize,
    active: &mut ActiveSet,
) -> Result<Vec<Transit>, EngineError> {
    let eligible = |c: &CandidateProcess| {
        e.t > c.t_last && e.t - c.t_last <= delta && c.edge_count() < l_max
    };
    let mut handles = Vec::new();
    active.matches_at(e.src, None, eligible, &mut handles);
    if e.dst != e.src {
        // A candidate containing both endpoints was already collected above.
        active.matches_at(e.dst, Some(e.src), eligible, &mut handles);
    }
    let mut transits = Vec::with_capacity(handles.len());
    for h in handles {
        let cand = active.remove(h).expect("matched candidates are live");
        let parent = cand.code.clone();
        let dwell = (e.t - cand.t_last) as u64;
        let (code, labels) = extend(cand.code, cand.labels, e.src, e.dst)?;
        transits.push(Transit {
            parent,
            child: CandidateProcess { code, labels, t_last: e.t },
            dwell,
        });
    }
    Ok(transits)
}

/// Metrics of one window run, for resource-bound checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct WindowMetrics {
    /// Peak number of simultaneously live candidates.
    pub peak_live: usize,
}

/// Runs discovery over one window. `edges` must be in canonical `(t, seq)`
/// order with every timestamp below `t_end`.
pub fn discover_window(
    edges: &[TemporalEdge],
    delta: Timestamp,
    l_max: usize,
    t_end: Timestamp,
) -> Result<TransitionStats, EngineError> {
    discover_window_metered(edges, delta, l_max, t_end).map(|(stats, _)| stats)
}

/// [`discover_window`] variant that also reports run metrics.
pub fn discover_window_metered(
    edges: &[TemporalEdge],
    delta: Timestamp,
    l_max: usize,
    t_end: Timestamp,
) -> Result<(TransitionStats, WindowMetrics), EngineError> {
    if delta <= 0 {
        return Err(EngineError::InvalidArgument("delta must be positive"));
    }
    if l_max < 1 {
        return Err(EngineError::InvalidArgument("l_max must be at least 1"));
    }
    for (i, pair) in edges.windows(2).enumerate() {
        if (pair[0].t, pair[0].seq) >= (pair[1].t, pair[1].seq) {
            return Err(EngineError::UnsortedInput(i + 1));
        }
    }
    if let Some(last) = edges.last() {
        if last.t >= t_end {
            return Err(EngineError::EdgeBeyondWindow { t: last.t, t_end });
        }
    }

    let mut stats = TransitionStats::default();
    let mut active = ActiveSet::new();

    for e in edges {
        // (1) Candidates whose gap lapsed before this arrival are terminal.
        active.expire_before(e.t - delta, |c| stats.record_terminal(c.code));

        // (2) Grow every candidate this edge can extend.
        for tr in try_to_transit(e, delta, l_max, &mut active)? {
            stats.record_transition(tr.parent, tr.child.code.clone(), tr.dwell);
            stats.record_observed(tr.child.code.clone());
            if tr.child.edge_count() >= l_max {
                stats.record_terminal(tr.child.code);
            } else {
                active.insert(tr.child);
            }
        }

        // (3) The edge itself starts a new one-edge process.
        let (code, labels) = MotifCode::seed(e.src, e.dst);
        stats.record_observed(code.clone());
        if l_max == 1 {
            stats.record_terminal(code);
        } else {
            active.insert(CandidateProcess { code, labels, t_last: e.t });
        }
    }

    // Window end: whatever is still live can grow no further.
    active.drain(|c| stats.record_terminal(c.code));

    let metrics = WindowMetrics { peak_live: active.peak_live() };
    Ok((stats, metrics))
}
