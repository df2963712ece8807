//! Compile-and-run check for the library example shown in the README.

use mtproc::{graph, run_parallel, RunConfig};

#[test]
fn readme_library_example_runs() -> Result<(), Box<dyn std::error::Error>> {
    let graph = graph::parse_edge_list("1 2 3600\n2 3 4800\n".as_bytes(), true)?.graph;
    let cfg = RunConfig { delta: 1800, l_max: 3, omega: 20, threads: 4 };
    let stats = run_parallel(&graph, &cfg)?;
    for (pair, tally) in &stats.transitions {
        println!("{} -> {}: {} (dwell {}s)", pair.0, pair.1, tally.count, tally.dwell_sum);
    }
    assert_eq!(stats.terminals.values().sum::<u64>(), 2);
    Ok(())
}
