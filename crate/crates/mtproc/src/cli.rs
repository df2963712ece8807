//! Command-line binding: ingestion, partitioning, zone-parallel discovery,
//! verification against the sequential engine, and report rendering.
//!
//! Exit codes: 0 success, 1 usage or I/O failure, 2 input parse failure,
//! 3 internal invariant violation, 4 verification mismatch.

use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::code::MotifCode;
use crate::engine;
use crate::graph::{self, GraphError, TemporalGraph};
use crate::parallel::{self, ParallelError};
use crate::report::{self, RunMeta};
use crate::zones::{self, RunConfig, ZoneKind};

const EXIT_USAGE_IO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

/// A dispatch failure carrying its process exit code.
#[derive(Debug)]
enum CliError {
    UsageIo(String),
    Parse(String),
    Internal(String),
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::UsageIo(_) => EXIT_USAGE_IO,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::UsageIo(m)
            | CliError::Parse(m)
            | CliError::Internal(m)
            | CliError::Mismatch(m) => m,
        }
    }
}

impl From<ParallelError> for CliError {
    fn from(e: ParallelError) -> Self {
        match e {
            ParallelError::Config(c) => CliError::UsageIo(c.to_string()),
            ParallelError::ThreadPool(m) => CliError::UsageIo(m),
            // The pipeline feeds the engine canonically sorted slices, so
            // engine rejections at this point are bugs, not user errors.
            ParallelError::Engine(e) => CliError::Internal(e.to_string()),
            ParallelError::InvariantViolation(m) => CliError::Internal(m),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mtproc",
    version,
    about = "Discover motif transition processes in temporal graphs",
    long_about = "Discovers motif transition processes in temporal edge lists: every edge \
                  starts a process that grows by single-edge extensions within a gap bound, \
                  and the engine tallies each transition, dwell time, and stopping state. \
                  Large time ranges are partitioned into overlapping zones that run in \
                  parallel and merge exactly."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input edge list file (`src dst t` per line); standard input if absent
    #[arg(long, short = 'i')]
    input: Option<PathBuf>,
    /// Output file; standard output if absent
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConfigArgs {
    /// Maximum gap in seconds between consecutive edges of a process
    #[arg(long, default_value_t = 600, value_parser = clap::value_parser!(i64).range(1..))]
    delta: i64,
    /// Maximum process size in edges (the label alphabet caps this at 35)
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=35))]
    lmax: u64,
    /// Growth-zone length as a multiple of delta * lmax
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(2..))]
    omega: u32,
    /// Worker threads; defaults to available parallelism
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Fail on malformed input lines instead of skipping them
    #[arg(long)]
    strict: bool,
}

impl ConfigArgs {
    fn run_config(&self) -> RunConfig {
        let threads = self
            .threads
            .map(|t| t as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        RunConfig { delta: self.delta, l_max: self.lmax as usize, omega: self.omega, threads }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportView {
    /// Proportion table with per-parent totals and terminal counts
    Table,
    Tsv,
    Json,
    /// Transition tree below --root
    Tree,
    /// DOT digraph below --root
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Run zone-parallel discovery and write the merged statistics
    Discover {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Run both the zone-parallel and the sequential whole-graph paths and
    /// compare every counter
    Verify {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Corrupt one zone counter before merging (debugging the detector)
        #[arg(long, hide = true)]
        debug_corrupt: bool,
    },
    /// Print the zone partition table for the input's time range
    Zones {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Write a seed-deterministic synthetic edge list
    Gen {
        /// Output file; standard output if absent
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(2..))]
        nodes: u64,
        #[arg(long, default_value_t = 1000)]
        edges: u64,
        /// Timestamps are drawn uniformly from [0, span)
        #[arg(long, default_value_t = 86_400, value_parser = clap::value_parser!(i64).range(1..))]
        span: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Permit src == dst edges
        #[arg(long)]
        self_loops: bool,
    },
    /// Render a statistics document produced by `discover --format json`
    Report {
        /// Statistics document from `discover --format json`; standard input if absent
        #[arg(long, short = 'i')]
        input: Option<PathBuf>,
        /// Output file; standard output if absent
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportView::Table)]
        view: ReportView,
        /// Root motif code for the tree and dot views
        #[arg(long)]
        root: Option<String>,
        /// Depth limit for the tree and dot views
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_USAGE_IO) };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Discover { io, cfg, format } => discover(&io, &cfg.run_config(), cfg.strict, format),
        Command::Verify { io, cfg, debug_corrupt } => {
            verify(&io, &cfg.run_config(), cfg.strict, debug_corrupt)
        }
        Command::Zones { io, cfg } => zones_table(&io, &cfg.run_config(), cfg.strict),
        Command::Gen { output, nodes, edges, span, seed, self_loops } => {
            gen(&output, &graph::GenSpec { nodes, edges, span, seed, self_loops })
        }
        Command::Report { input, output, view, root, depth } => {
            render_report(&input, &output, view, root.as_deref(), depth)
        }
    }
}

// === shared plumbing ===

fn read_graph(input: &Option<PathBuf>, strict: bool) -> Result<TemporalGraph, CliError> {
    let outcome = match input {
        Some(path) => {
            let file = File::open(path).map_err(|e| {
                CliError::UsageIo(format!("cannot open {}: {e}", path.display()))
            })?;
            graph::parse_edge_list(BufReader::new(file), strict)
        }
        None => graph::parse_edge_list(io::stdin().lock(), strict),
    };
    match outcome {
        Ok(parsed) => {
            if parsed.skipped > 0 {
                eprintln!("skipped {} malformed line(s)", parsed.skipped);
            }
            Ok(parsed.graph)
        }
        Err(e @ GraphError::Malformed { .. }) => Err(CliError::Parse(e.to_string())),
        Err(e) => Err(CliError::UsageIo(e.to_string())),
    }
}

fn read_text(input: &Option<PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    let result = match input {
        Some(path) => File::open(path)
            .map_err(|e| format!("cannot open {}: {e}", path.display()))
            .and_then(|mut f| f.read_to_string(&mut text).map_err(|e| e.to_string())),
        None => io::stdin().lock().read_to_string(&mut text).map_err(|e| e.to_string()),
    };
    result.map_err(CliError::UsageIo)?;
    Ok(text)
}

fn write_output(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    let result = match output {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    result.or_else(|e| {
        // A consumer such as `head` closing stdout early is not a failure.
        if output.is_none() && e.kind() == io::ErrorKind::BrokenPipe {
            Ok(())
        } else {
            Err(CliError::UsageIo(format!("cannot write output: {e}")))
        }
    })
}

// === subcommands ===

fn discover(
    io_args: &IoArgs,
    cfg: &RunConfig,
    strict: bool,
    format: Format,
) -> Result<(), CliError> {
    let graph = read_graph(&io_args.input, strict)?;
    let results = parallel::run_zones(&graph, cfg)?;
    let zone_count = results.len();
    let stats = parallel::merge(&results)?;
    let text = match format {
        Format::Tsv => report::to_tsv(&stats),
        Format::Json => report::to_json(
            &stats,
            &RunMeta {
                delta: cfg.delta,
                l_max: cfg.l_max,
                omega: cfg.omega,
                threads: cfg.threads,
                zones: zone_count,
            },
        ),
    };
    write_output(&io_args.output, &text)
}

/// First difference between two count maps under ascending key order.
fn first_diff<K: Ord + std::hash::Hash, V: PartialEq + std::fmt::Debug>(
    parallel: &std::collections::HashMap<K, V>,
    sequential: &std::collections::HashMap<K, V>,
    render: impl Fn(&K) -> String,
) -> Option<String> {
    let mut keys: Vec<&K> = parallel.keys().chain(sequential.keys()).collect();
    keys.sort();
    keys.dedup();
    for k in keys {
        let a = parallel.get(k);
        let b = sequential.get(k);
        if a != b {
            return Some(format!("{}: parallel {:?}, sequential {:?}", render(k), a, b));
        }
    }
    None
}

fn verify(
    io_args: &IoArgs,
    cfg: &RunConfig,
    strict: bool,
    debug_corrupt: bool,
) -> Result<(), CliError> {
    let graph = read_graph(&io_args.input, strict)?;
    let mut results = parallel::run_zones(&graph, cfg)?;
    if debug_corrupt {
        // The partition always ends with a growth zone, so inflating the
        // last result can never drive a merged counter negative.
        if let Some(last) = results.last_mut() {
            let probe = MotifCode::from_str("01").expect("static code");
            *last.stats.observed.entry(probe).or_insert(0) += 1;
            eprintln!("debug: inflated one observed counter in the final zone");
        }
    }
    let merged = parallel::merge(&results)?;
    let t_end = graph.t_max().map_or(1, |t| t + 1);
    let sequential = engine::discover_window(graph.edges(), cfg.delta, cfg.l_max, t_end)
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let mut out = String::new();
    let mut failure = None;
    let transitions_diff = first_diff(&merged.transitions, &sequential.transitions, |(p, c)| {
        format!("transition {p}->{c}")
    });
    let terminal_diff =
        first_diff(&merged.terminals, &sequential.terminals, |c| format!("terminal {c}"));
    let observed_diff =
        first_diff(&merged.observed, &sequential.observed, |c| format!("observed {c}"));
    for (name, entries, diff) in [
        ("transitions", merged.transitions.len(), transitions_diff),
        ("terminals", merged.terminals.len(), terminal_diff),
        ("observed", merged.observed.len(), observed_diff),
    ] {
        match diff {
            None => out.push_str(&format!("{name}: OK ({entries} entries)\n")),
            Some(d) => {
                out.push_str(&format!("{name}: MISMATCH at {d}\n"));
                failure.get_or_insert(d);
            }
        }
    }
    write_output(&io_args.output, &out)?;
    match failure {
        None => Ok(()),
        Some(d) => Err(CliError::Mismatch(format!("parallel and sequential runs differ: {d}"))),
    }
}

fn zones_table(io_args: &IoArgs, cfg: &RunConfig, strict: bool) -> Result<(), CliError> {
    let graph = read_graph(&io_args.input, strict)?;
    let mut out = String::from("zone\tt_start\tt_end\tedges\n");
    if let (Some(t_min), Some(t_max)) = (graph.t_min(), graph.t_max()) {
        let zone_list = zones::partition(t_min, t_max, cfg)
            .map_err(|e| CliError::UsageIo(e.to_string()))?;
        let slices = zones::slice_edges(&graph, &zone_list);
        for (zone, slice) in zone_list.iter().zip(slices) {
            let tag = match zone.kind {
                ZoneKind::Growth => 'G',
                ZoneKind::Boundary => 'B',
            };
            out.push_str(&format!(
                "{tag}{}\t{}\t{}\t{}\n",
                zone.index,
                zone.t_start,
                zone.t_end,
                slice.len()
            ));
        }
    }
    write_output(&io_args.output, &out)
}

fn gen(output: &Option<PathBuf>, spec: &graph::GenSpec) -> Result<(), CliError> {
    let graph = graph::gen_uniform(spec).map_err(|e| CliError::UsageIo(e.to_string()))?;
    let mut text = Vec::new();
    graph::serialize_edges(&graph, &mut text)
        .map_err(|e| CliError::UsageIo(format!("cannot serialize: {e}")))?;
    write_output(output, &String::from_utf8(text).expect("edge lines are ASCII"))
}

fn render_report(
    input: &Option<PathBuf>,
    output: &Option<PathBuf>,
    view: ReportView,
    root: Option<&str>,
    depth: usize,
) -> Result<(), CliError> {
    let text = read_text(input)?;
    let (meta, stats) = report::from_json(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    let rendered = match view {
        ReportView::Table => report::proportions(&stats).render_table(),
        ReportView::Tsv => report::to_tsv(&stats),
        ReportView::Json => report::to_json(&stats, &meta),
        ReportView::Tree | ReportView::Dot => {
            let root = root.ok_or_else(|| {
                CliError::UsageIo("--root is required for tree and dot views".into())
            })?;
            let root = MotifCode::from_str(root)
                .map_err(|e| CliError::UsageIo(format!("invalid --root: {e}")))?;
            let rendered = if view == ReportView::Tree {
                report::render_tree(&stats, &root, depth)
            } else {
                report::tree_dot(&stats, &root, depth)
            };
            rendered.unwrap_or_else(|| {
                eprintln!("warning: code {root} does not appear in the statistics");
                String::new()
            })
        }
    };
    write_output(output, &rendered)
}
