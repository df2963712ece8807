//! Temporal zone partitioning: overlapping growth zones plus the boundary
//! zones they share, so that windowed runs can be merged exactly.
//!
//! With gap bound `delta` and size cap `l_max`, a process spans at most
//! `(l_max - 1) * delta` seconds and is certified terminal `delta` after its
//! last edge, so a horizon of `L_b = delta * l_max` seconds suffices to
//! finish any process started at a given instant. Growth zones are
//! `L_g = omega * delta * l_max` long and advance by `L_g - L_b`, which makes
//! consecutive growth zones overlap in exactly `L_b`; that overlap is
//! emitted as a boundary zone. Every process that starts in a zone's
//! non-overlap prefix completes inside that zone, and processes starting in
//! an overlap are double-counted by the two growth zones and subtracted once
//! via the boundary zone run (see [`crate::parallel`]).
//!
//! All intervals are half-open `[t_start, t_end)`. The final growth zone's
//! end is pinned to exactly `t_max + 1` so the zone intervals cover the data
//! range precisely — it is the one zone whose length may differ from `L_g`.

use thiserror::Error;

use crate::graph::{TemporalEdge, TemporalGraph, Timestamp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("zone geometry overflows the timestamp range")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZoneKind {
    Growth,
    Boundary,
}

impl ZoneKind {
    pub fn label(self) -> &'static str {
        match self {
            ZoneKind::Growth => "growth",
            ZoneKind::Boundary => "boundary",
        }
    }
}

/// One zone of the partition; `index` is 1-based per kind (G_1, G_2, ... and
/// B_1, B_2, ... interleave as G_1, B_1, G_2, B_2, ..., G_k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zone {
    pub kind: ZoneKind,
    pub index: usize,
    pub t_start: Timestamp,
    pub t_end: Timestamp,
}

impl Zone {
    pub fn contains(&self, t: Timestamp) -> bool {
        self.t_start <= t && t < self.t_end
    }
}

/// Run parameters shared by partitioning and discovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    /// Maximum gap between consecutive process edges, in seconds.
    pub delta: Timestamp,
    /// Maximum process size in edges.
    pub l_max: usize,
    /// Growth-zone expansion factor: growth zones span `omega` boundary
    /// lengths.
    pub omega: u32,
    pub threads: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.delta < 1 {
            return Err(ConfigError::InvalidArgument("delta must be at least 1"));
        }
        if self.l_max < 1 {
            return Err(ConfigError::InvalidArgument("l_max must be at least 1"));
        }
        if self.omega < 2 {
            return Err(ConfigError::InvalidArgument(
                "omega must be at least 2 (growth zones must outgrow their overlap)",
            ));
        }
        if self.threads < 1 {
            return Err(ConfigError::InvalidArgument("threads must be at least 1"));
        }
        self.growth_len().map(|_| ())
    }

    /// Boundary-zone length `L_b = delta * l_max`: the horizon within which
    /// any process started at a given instant finishes and is certified.
    pub fn boundary_len(&self) -> Result<Timestamp, ConfigError> {
        let l_max = Timestamp::try_from(self.l_max).map_err(|_| ConfigError::Overflow)?;
        self.delta.checked_mul(l_max).ok_or(ConfigError::Overflow)
    }

    /// Growth-zone length `L_g = omega * delta * l_max`.
    pub fn growth_len(&self) -> Result<Timestamp, ConfigError> {
        self.boundary_len()?
            .checked_mul(Timestamp::from(self.omega))
            .ok_or(ConfigError::Overflow)
    }
}

/// Computes the zone partition of `[t_min, t_max]`, in timeline order
/// (G_1, B_1, G_2, ..., G_k).
///
/// Growth zones start at `t_min` and advance by `L_g - L_b`; emission stops
/// at the first zone whose natural end `s_k + L_g` reaches `t_max`, and that
/// final zone's end is set to exactly `t_max + 1` so the union of growth
/// zones is precisely `[t_min, t_max + 1)`. Each consecutive pair shares the
/// boundary zone `[end(G_i) - L_b, end(G_i))`; there is no boundary after
/// the final growth zone.
pub fn partition(
    t_min: Timestamp,
    t_max: Timestamp,
    cfg: &RunConfig,
) -> Result<Vec<Zone>, ConfigError> {
    cfg.validate()?;
    if t_min > t_max {
        return Err(ConfigError::InvalidArgument("t_min must not exceed t_max"));
    }
    let growth = cfg.growth_len()?;
    let boundary = cfg.boundary_len()?;
    let stride = growth - boundary;
    let cover_end = t_max.checked_add(1).ok_or(ConfigError::Overflow)?;

    let mut zones = Vec::new();
    let mut start = t_min;
    let mut index = 1usize;
    loop {
        let natural_end = start.checked_add(growth).ok_or(ConfigError::Overflow)?;
        if natural_end >= t_max {
            zones.push(Zone { kind: ZoneKind::Growth, index, t_start: start, t_end: cover_end });
            break;
        }
        zones.push(Zone { kind: ZoneKind::Growth, index, t_start: start, t_end: natural_end });
        zones.push(Zone {
            kind: ZoneKind::Boundary,
            index,
            t_start: natural_end - boundary,
            t_end: natural_end,
        });
        start += stride;
        index += 1;
    }
    Ok(zones)
}

/// Slices the edge list per zone. Edges are contiguous in canonical order
/// within any time interval, so each slice borrows from the graph; an edge
/// appears in every zone containing its timestamp (at most `G_i`, `B_i`,
/// `G_{i+1}`).
pub fn slice_edges<'g>(graph: &'g TemporalGraph, zones: &[Zone]) -> Vec<&'g [TemporalEdge]> {
    let edges = graph.edges();
    zones
        .iter()
        .map(|z| {
            let lo = edges.partition_point(|e| e.t < z.t_start);
            let hi = edges.partition_point(|e| e.t < z.t_end);
            &edges[lo..hi]
        })
        .collect()
}
