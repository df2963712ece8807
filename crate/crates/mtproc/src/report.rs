//! Presentation of discovery statistics: per-parent transition proportion
//! tables, transition trees, and TSV/JSON serializations.
//!
//! Percentages are rounded half-up to two decimals and computed in integer
//! arithmetic (hundredths of a percent), so formatting is an exact function
//! of the counts. All orderings are fixed — parents ascending, children by
//! descending count then ascending code — which makes every rendering
//! byte-deterministic for equal statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, MotifCode};
use crate::engine::{TransitionStats, TransitionTally};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed stats document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid motif code in stats document: {0}")]
    Code(#[from] CodeError),
}

// === proportions ===

/// Hundredths of a percent of `count` in `total`, rounded half-up.
/// `pct_hundredths(95_805, 832_440) == 1151`, printed as `11.51`.
pub fn pct_hundredths(count: u64, total: u64) -> u64 {
    if total == 0 {
        return 0;
    }
    let n = u128::from(count) * 20_000 + u128::from(total);
    u64::try_from(n / (2 * u128::from(total))).expect("percentage fits u64")
}

/// Renders hundredths of a percent as a 2-decimal string ("1151" -> "11.51").
pub fn format_pct(hundredths: u64) -> String {
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// One child row of a parent's transition group.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionRow {
    pub parent: MotifCode,
    pub child: MotifCode,
    pub count: u64,
    /// Share of the parent's total evolved transitions, in hundredths of a
    /// percent.
    pub pct_hundredths: u64,
    /// Mean dwell seconds; absent when the row's count is zero.
    pub mean_dwell: Option<f64>,
}

/// All transitions out of one parent, children by descending count (ties by
/// ascending child code).
#[derive(Debug, Clone, PartialEq)]
pub struct ParentGroup {
    pub parent: MotifCode,
    pub rows: Vec<ProportionRow>,
    /// Sum of child counts: the parent's processes that evolved further.
    pub total_evolved: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProportionsReport {
    /// Groups in ascending parent-code order.
    pub groups: Vec<ParentGroup>,
    /// Terminal counts in ascending code order.
    pub terminals: Vec<(MotifCode, u64)>,
}

pub fn proportions(stats: &TransitionStats) -> ProportionsReport {
    let mut by_parent: BTreeMap<&MotifCode, Vec<(&MotifCode, &TransitionTally)>> = BTreeMap::new();
    for ((parent, child), tally) in &stats.transitions {
        by_parent.entry(parent).or_default().push((child, tally));
    }

    let groups = by_parent
        .into_iter()
        .map(|(parent, mut kids)| {
            kids.sort_by(|a, b| b.1.count.cmp(&a.1.count).then_with(|| a.0.cmp(b.0)));
            let total_evolved: u64 = kids.iter().map(|(_, t)| t.count).sum();
            let rows = kids
                .into_iter()
                .map(|(child, tally)| ProportionRow {
                    parent: parent.clone(),
                    child: child.clone(),
                    count: tally.count,
                    pct_hundredths: pct_hundredths(tally.count, total_evolved),
                    mean_dwell: (tally.count > 0)
                        .then(|| tally.dwell_sum as f64 / tally.count as f64),
                })
                .collect();
            ParentGroup { parent: parent.clone(), rows, total_evolved }
        })
        .collect();

    let mut terminals: Vec<(MotifCode, u64)> =
        stats.terminals.iter().map(|(c, n)| (c.clone(), *n)).collect();
    terminals.sort_by(|a, b| a.0.cmp(&b.0));

    ProportionsReport { groups, terminals }
}

impl ProportionsReport {
    /// Plain-text table: one block per parent with a closing total row, then
    /// the terminal counts.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            let _ = writeln!(out, "parent {}", g.parent);
            let width = g
                .rows
                .iter()
                .map(|r| r.child.to_string().len())
                .chain(["total".len()])
                .max()
                .unwrap_or(5);
            for r in &g.rows {
                let dwell = r
                    .mean_dwell
                    .map_or_else(|| "-".to_string(), |d| format!("{d:.2}"));
                let _ = writeln!(
                    out,
                    "  {:<width$}  {:>12}  {:>7}%  {:>12}",
                    r.child.to_string(),
                    r.count,
                    format_pct(r.pct_hundredths),
                    dwell,
                );
            }
            let _ = writeln!(out, "  {:<width$}  {:>12}  evolved", "total", g.total_evolved);
            out.push('\n');
        }
        out.push_str("terminals\n");
        for (code, count) in &self.terminals {
            let _ = writeln!(out, "  {code}  {count}");
        }
        out
    }
}

// === transition trees ===

fn is_known(stats: &TransitionStats, code: &MotifCode) -> bool {
    stats.observed.contains_key(code)
        || stats.terminals.contains_key(code)
        || stats.transitions.keys().any(|(p, c)| p == code || c == code)
}

/// Transition targets of `parent`, by descending count then ascending code.
fn children_of(stats: &TransitionStats, parent: &MotifCode) -> Vec<(MotifCode, TransitionTally)> {
    let mut kids: Vec<(MotifCode, TransitionTally)> = stats
        .transitions
        .iter()
        .filter(|((p, _), _)| p == parent)
        .map(|((_, c), tally)| (c.clone(), *tally))
        .collect();
    kids.sort_by(|a, b| b.1.count.cmp(&a.1.count).then_with(|| a.0.cmp(&b.0)));
    kids
}

fn branch_label(node: &MotifCode, tally: TransitionTally, sibling_total: u64) -> String {
    let pct = format_pct(pct_hundredths(tally.count, sibling_total));
    format!("{node} {} ({pct}%)", tally.count)
}

fn push_subtree(
    out: &mut String,
    stats: &TransitionStats,
    node: &MotifCode,
    label: &str,
    prefix: &str,
    last: bool,
    depth_left: usize,
) {
    let branch = if last { "└── " } else { "├── " };
    let _ = writeln!(out, "{prefix}{branch}{label}");
    if depth_left == 0 {
        return;
    }
    let kids = children_of(stats, node);
    let total: u64 = kids.iter().map(|(_, t)| t.count).sum();
    let child_prefix = format!("{prefix}{}", if last { "    " } else { "│   " });
    for (i, (child, t)) in kids.iter().enumerate() {
        let last_child = i + 1 == kids.len();
        let label = branch_label(child, *t, total);
        push_subtree(out, stats, child, &label, &child_prefix, last_child, depth_left - 1);
    }
}

/// Renders the transition tree below `root`, depth-limited to `max_depth`
/// levels of children. Returns `None` when the root code never appears in
/// the statistics.
pub fn render_tree(stats: &TransitionStats, root: &MotifCode, max_depth: usize) -> Option<String> {
    if !is_known(stats, root) {
        return None;
    }
    let mut out = format!("{root}\n");
    if max_depth == 0 {
        return Some(out);
    }
    let kids = children_of(stats, root);
    if kids.is_empty() {
        out.push_str("└── (no transitions)\n");
        return Some(out);
    }
    let total: u64 = kids.iter().map(|(_, t)| t.count).sum();
    for (i, (child, tally)) in kids.iter().enumerate() {
        let last = i + 1 == kids.len();
        let label = branch_label(child, *tally, total);
        push_subtree(&mut out, stats, child, &label, "", last, max_depth - 1);
    }
    Some(out)
}

/// DOT rendering of the same tree (node label = code, edge label =
/// count/pct). Returns `None` for an unknown root.
pub fn tree_dot(stats: &TransitionStats, root: &MotifCode, max_depth: usize) -> Option<String> {
    if !is_known(stats, root) {
        return None;
    }
    let mut out = String::from("digraph transitions {\n  node [shape=box];\n");
    let _ = writeln!(out, "  \"{root}\";");
    let mut stack = vec![(root.clone(), max_depth)];
    while let Some((node, depth_left)) = stack.pop() {
        if depth_left == 0 {
            continue;
        }
        let kids = children_of(stats, &node);
        let total: u64 = kids.iter().map(|(_, t)| t.count).sum();
        for (child, tally) in &kids {
            let pct = format_pct(pct_hundredths(tally.count, total));
            let _ = writeln!(
                out,
                "  \"{node}\" -> \"{child}\" [label=\"{} ({pct}%)\"];",
                tally.count
            );
        }
        // Reverse so the stack pops subtrees in display order.
        for (child, _) in kids.into_iter().rev() {
            stack.push((child, depth_left - 1));
        }
    }
    out.push_str("}\n");
    Some(out)
}

// === serialization ===

/// Run parameters echoed into serialized output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    pub delta: i64,
    pub l_max: usize,
    pub omega: u32,
    pub threads: usize,
    pub zones: usize,
}

#[derive(Serialize, Deserialize)]
struct TransitionJsonRow {
    parent: String,
    child: String,
    count: u64,
    dwell_sum: u64,
}

#[derive(Serialize, Deserialize)]
struct CountJsonRow {
    code: String,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct StatsDoc {
    meta: RunMeta,
    transitions: Vec<TransitionJsonRow>,
    terminals: Vec<CountJsonRow>,
    observed: Vec<CountJsonRow>,
}

fn sorted_counts(map: &std::collections::HashMap<MotifCode, u64>) -> Vec<CountJsonRow> {
    let mut rows: Vec<_> = map
        .iter()
        .map(|(c, n)| CountJsonRow { code: c.to_string(), count: *n })
        .collect();
    rows.sort_by(|a, b| a.code.cmp(&b.code));
    rows
}

/// Serializes statistics plus run metadata as JSON. Dwell sums are kept as
/// exact integers so the document round-trips losslessly.
pub fn to_json(stats: &TransitionStats, meta: &RunMeta) -> String {
    let mut transitions: Vec<_> = stats
        .transitions
        .iter()
        .map(|((p, c), t)| TransitionJsonRow {
            parent: p.to_string(),
            child: c.to_string(),
            count: t.count,
            dwell_sum: t.dwell_sum,
        })
        .collect();
    transitions.sort_by(|a, b| a.parent.cmp(&b.parent).then_with(|| a.child.cmp(&b.child)));
    let doc = StatsDoc {
        meta: *meta,
        transitions,
        terminals: sorted_counts(&stats.terminals),
        observed: sorted_counts(&stats.observed),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses a document produced by [`to_json`].
pub fn from_json(text: &str) -> Result<(RunMeta, TransitionStats), ReportError> {
    let doc: StatsDoc = serde_json::from_str(text)?;
    let mut stats = TransitionStats::default();
    for row in doc.transitions {
        let parent = MotifCode::from_str(&row.parent)?;
        let child = MotifCode::from_str(&row.child)?;
        stats.transitions.insert(
            (parent, child),
            TransitionTally { count: row.count, dwell_sum: row.dwell_sum },
        );
    }
    for row in doc.terminals {
        stats.terminals.insert(MotifCode::from_str(&row.code)?, row.count);
    }
    for row in doc.observed {
        stats.observed.insert(MotifCode::from_str(&row.code)?, row.count);
    }
    Ok((doc.meta, stats))
}

/// Serializes statistics as sectioned TSV: transition rows
/// (`parent  child  count  pct  mean_dwell_s`), then terminal and observed
/// count rows (`code  count`). Presentational — percentages and dwell means
/// are derived columns.
pub fn to_tsv(stats: &TransitionStats) -> String {
    let report = proportions(stats);
    let mut out = String::from("# transitions\nparent\tchild\tcount\tpct\tmean_dwell_s\n");
    for g in &report.groups {
        for r in &g.rows {
            let dwell = r.mean_dwell.map_or_else(|| "-".to_string(), |d| format!("{d:.2}"));
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.parent,
                r.child,
                r.count,
                format_pct(r.pct_hundredths),
                dwell
            );
        }
    }
    out.push_str("# terminals\ncode\tcount\n");
    for (code, count) in &report.terminals {
        let _ = writeln!(out, "{code}\t{count}");
    }
    out.push_str("# observed\ncode\tcount\n");
    let mut observed: Vec<_> = stats.observed.iter().collect();
    observed.sort_by(|a, b| a.0.cmp(b.0));
    for (code, count) in observed {
        let _ = writeln!(out, "{code}\t{count}");
    }
    out
}
