//! Exact discovery of motif transition processes in temporal graphs.
//!
//! A temporal graph is a directed multigraph whose edges carry timestamps.
//! Every edge starts a *process*: a chain of motifs that grows one edge at a
//! time, where each extension must share a node with the motif, arrive
//! strictly later than its last edge, and arrive within the gap bound
//! `delta`. A process stops when it reaches `l_max` edges or when no
//! extension arrives in time; the engine tallies every transition (with
//! dwell times) and every stopping state, keyed by canonical motif codes.
//!
//! Pipeline: [`graph`] parses and generates edge lists; [`code`] assigns
//! canonical codes under first-appearance relabeling; [`engine`] runs
//! discovery over one window; [`zones`] partitions long time ranges into
//! overlapping zones; [`parallel`] runs zones concurrently and merges them
//! with signed counts into exactly the sequential answer; [`report`] renders
//! tables, trees, TSV, and JSON; [`cli`] binds it all into a command-line
//! tool.

pub mod cli;
pub mod code;
pub mod engine;
pub mod graph;
pub mod parallel;
pub mod report;
pub mod zones;

pub use code::{CodeError, MotifCode, NodeId};
pub use engine::{discover_window, EngineError, TransitionStats};
pub use graph::{TemporalEdge, TemporalGraph, Timestamp};
pub use parallel::{merge, run_parallel, ParallelError, ZoneResult};
pub use zones::{partition, RunConfig, Zone, ZoneKind};
