//! Concurrent per-zone discovery and the signed merge that makes it exact.
//!
//! Each zone is an independent discovery window over its edge slice. A
//! process is counted by every growth zone that contains its origin edge:
//! once if the origin lies in a zone's exclusive prefix, twice if it lies in
//! the overlap of two growth zones. In the latter case the boundary zone —
//! which is exactly that overlap, shares the earlier zone's end, and
//! therefore sees the identical truncation of every such process — records
//! the same duplicate contribution. Summing growth-zone counters with weight
//! +1 and boundary-zone counters with weight −1 cancels every duplicate, so
//! the merged maps equal those of a single whole-graph run, counter for
//! counter.
//!
//! Workers never share mutable state: the graph is read-only, each zone's
//! engine state is private, and the merge is a sequential reduction after
//! all zones finish, so results are independent of thread count and
//! scheduling order.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::code::MotifCode;
use crate::engine::{self, EngineError, TransitionStats, TransitionTally, WindowMetrics};
use crate::graph::TemporalGraph;
use crate::zones::{self, ConfigError, RunConfig, Zone, ZoneKind};

#[derive(Debug, Error)]
pub enum ParallelError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    /// A merged counter went negative (or a cancelled counter kept a dwell
    /// residue). Zone runs can only produce this through a bug, never
    /// through input data.
    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

/// Outcome of one zone's discovery run, tagged with its merge weight.
#[derive(Debug, Clone)]
pub struct ZoneResult {
    pub zone: Zone,
    pub stats: TransitionStats,
    /// +1 for growth zones, -1 for boundary zones; fixed by the kind.
    pub sign: i64,
    pub metrics: WindowMetrics,
}

impl ZoneResult {
    pub fn new(zone: Zone, stats: TransitionStats, metrics: WindowMetrics) -> Self {
        let sign = match zone.kind {
            ZoneKind::Growth => 1,
            ZoneKind::Boundary => -1,
        };
        ZoneResult { zone, stats, sign, metrics }
    }
}

fn finalize<K: std::fmt::Debug>(key: &K, count: i128) -> Result<Option<u64>, ParallelError> {
    if count < 0 {
        return Err(ParallelError::InvariantViolation(format!(
            "merged count for {key:?} is negative ({count})"
        )));
    }
    if count == 0 {
        return Ok(None); // fully cancelled; a zero entry never exists sequentially
    }
    Ok(Some(u64::try_from(count).expect("non-negative i128 count fits u64")))
}

/// Signed pointwise sum of zone statistics. Commutative and associative in
/// its inputs; entries that cancel to zero are dropped so the result matches
/// a sequential run map-for-map.
pub fn merge(results: &[ZoneResult]) -> Result<TransitionStats, ParallelError> {
    let mut transitions: HashMap<(MotifCode, MotifCode), (i128, i128)> = HashMap::new();
    let mut terminals: HashMap<MotifCode, i128> = HashMap::new();
    let mut observed: HashMap<MotifCode, i128> = HashMap::new();

    for r in results {
        let s = i128::from(r.sign);
        for (pair, tally) in &r.stats.transitions {
            let slot = transitions.entry(pair.clone()).or_default();
            slot.0 += s * i128::from(tally.count);
            slot.1 += s * i128::from(tally.dwell_sum);
        }
        for (code, n) in &r.stats.terminals {
            *terminals.entry(code.clone()).or_default() += s * i128::from(*n);
        }
        for (code, n) in &r.stats.observed {
            *observed.entry(code.clone()).or_default() += s * i128::from(*n);
        }
    }

    let mut out = TransitionStats::default();
    for (pair, (count, dwell_sum)) in transitions {
        if dwell_sum < 0 {
            return Err(ParallelError::InvariantViolation(format!(
                "merged dwell sum for {pair:?} is negative ({dwell_sum})"
            )));
        }
        match finalize(&pair, count)? {
            Some(count) => {
                let dwell_sum = u64::try_from(dwell_sum).map_err(|_| {
                    ParallelError::InvariantViolation(format!(
                        "merged dwell sum for {pair:?} overflows ({dwell_sum})"
                    ))
                })?;
                out.transitions.insert(pair, TransitionTally { count, dwell_sum });
            }
            None if dwell_sum != 0 => {
                return Err(ParallelError::InvariantViolation(format!(
                    "transition {pair:?} cancelled to zero but kept dwell {dwell_sum}"
                )));
            }
            None => {}
        }
    }
    for (code, count) in terminals {
        if let Some(count) = finalize(&code, count)? {
            out.terminals.insert(code, count);
        }
    }
    for (code, count) in observed {
        if let Some(count) = finalize(&code, count)? {
            out.observed.insert(code, count);
        }
    }
    Ok(out)
}

/// Partitions the graph into zones and runs discovery on each slice,
/// returning per-zone results in timeline order. The worker pool is local
/// to the call and sized by `cfg.threads`.
pub fn run_zones(graph: &TemporalGraph, cfg: &RunConfig) -> Result<Vec<ZoneResult>, ParallelError> {
    cfg.validate()?;
    let (Some(t_min), Some(t_max)) = (graph.t_min(), graph.t_max()) else {
        return Ok(Vec::new());
    };
    let zone_list = zones::partition(t_min, t_max, cfg)?;
    let slices = zones::slice_edges(graph, &zone_list);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| ParallelError::ThreadPool(e.to_string()))?;
    pool.install(|| {
        zone_list
            .par_iter()
            .zip(slices)
            .map(|(zone, slice)| {
                let (stats, metrics) =
                    engine::discover_window_metered(slice, cfg.delta, cfg.l_max, zone.t_end)?;
                Ok(ZoneResult::new(*zone, stats, metrics))
            })
            .collect()
    })
}

/// Runs zone-parallel discovery and merges, yielding exactly the statistics
/// of a single whole-graph window run.
pub fn run_parallel(graph: &TemporalGraph, cfg: &RunConfig) -> Result<TransitionStats, ParallelError> {
    merge(&run_zones(graph, cfg)?)
}
