//! Aggregating run records into per-group comparison tables.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use regex::Regex;
use thiserror::Error;

use crate::graph::Instance;
use crate::stp::{coverage_group, coverage_label, gap_permil, BoundsTable, RunRecord, RunStatus};

/// Gaps below this many permil count as optimal.
pub const OPTIMAL_GAP: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum GroupingError {
    #[error("line {line}: expected `pattern<TAB>group`")]
    Malformed { line: usize },
    #[error("line {line}: {source}")]
    Regex { line: usize, source: regex::Error },
}

/// Instance-name patterns mapped to group names; the first match wins.
#[derive(Debug, Clone, Default)]
pub struct Grouping {
    rules: Vec<(Regex, String)>,
}

impl Grouping {
    /// Parses lines of `regex<TAB>group`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, GroupingError> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (pat, group) = line.split_once('\t').ok_or(GroupingError::Malformed { line: i + 1 })?;
            let re = Regex::new(pat.trim()).map_err(|source| GroupingError::Regex { line: i + 1, source })?;
            rules.push((re, group.trim().to_string()));
        }
        Ok(Grouping { rules })
    }

    pub fn group_of(&self, instance: &str) -> Option<&str> {
        self.rules.iter().find(|(re, _)| re.is_match(instance)).map(|(_, g)| g.as_str())
    }
}

/// Size data needed for coverage and size-based groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceInfo {
    pub nodes: usize,
    pub edges: usize,
    pub terminals: usize,
}

impl InstanceInfo {
    pub fn of(inst: &Instance) -> Self {
        InstanceInfo {
            nodes: inst.node_count(),
            edges: inst.edge_count(),
            terminals: inst.terminals().len(),
        }
    }

    /// More than 16 000 edges or 8 000 nodes.
    pub fn is_large(&self) -> bool {
        self.edges > 16_000 || self.nodes > 8_000
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReportInputs<'a> {
    pub records: &'a [RunRecord],
    pub bounds: Option<&'a BoundsTable>,
    pub grouping: Option<&'a Grouping>,
    pub info: HashMap<String, InstanceInfo>,
    pub difficult: Option<HashSet<String>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Cell {
    pub successes: usize,
    pub optimal: usize,
    /// Averages over instances solved by every column of the table.
    pub avg_gap: Option<f64>,
    pub avg_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub group: String,
    pub instances: usize,
    /// Instances solved by all columns.
    pub mutual: usize,
    pub cells: Vec<Cell>,
}

impl ReportRow {
    pub fn success_pct(&self, col: usize) -> f64 {
        pct(self.cells[col].successes, self.instances)
    }

    pub fn optimal_pct(&self, col: usize) -> f64 {
        pct(self.cells[col].optimal, self.instances)
    }
}

fn pct(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        100.0 * a as f64 / b as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.digits$}"))
}

impl ReportTable {
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "### {}\n", self.title);
        let _ = write!(out, "| group | # | solved by all |");
        for c in &self.columns {
            let _ = write!(out, " {c}: success % | optimal % | gap ‰ | time s |");
        }
        out.push('\n');
        out.push_str(&"|---".repeat(3 + 4 * self.columns.len()));
        out.push_str("|\n");
        for row in &self.rows {
            let _ = write!(out, "| {} | {} | {} |", row.group, row.instances, row.mutual);
            for (i, cell) in row.cells.iter().enumerate() {
                let _ = write!(
                    out,
                    " {:.1} | {:.1} | {} | {} |",
                    row.success_pct(i),
                    row.optimal_pct(i),
                    fmt_opt(cell.avg_gap, 2),
                    fmt_opt(cell.avg_time, 3)
                );
            }
            out.push('\n');
        }
        out
    }

    /// Long format: one line per (group, column).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,group,instances,mutual,column,success_pct,optimal_pct,avg_gap_permil,avg_time_s\n");
        for row in &self.rows {
            for (i, cell) in row.cells.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},\"{}\",{:.2},{:.2},{},{}",
                    self.title,
                    row.group,
                    row.instances,
                    row.mutual,
                    self.columns[i],
                    row.success_pct(i),
                    row.optimal_pct(i),
                    cell.avg_gap.map_or(String::new(), |g| format!("{g:.4}")),
                    cell.avg_time.map_or(String::new(), |t| format!("{t:.4}")),
                );
            }
        }
        out
    }
}

fn column_label(r: &RunRecord) -> String {
    let mut label = r.algo.clone();
    if let Some(k) = r.k {
        let _ = write!(label, " k={k}");
    }
    if !r.flags.is_empty() {
        let _ = write!(label, " [{}]", r.flags);
    }
    label
}

/// Per instance and column: (success, gap, time).
type Outcomes = BTreeMap<String, Vec<Option<(bool, Option<f64>, f64)>>>;

fn build_row(group: &str, members: &[&String], outcomes: &Outcomes, ncols: usize) -> ReportRow {
    let mut cells = vec![Cell::default(); ncols];
    let mut mutual = 0;
    let mut gap_sum = vec![0.0; ncols];
    let mut time_sum = vec![0.0; ncols];
    for name in members {
        let row = &outcomes[*name];
        for (c, o) in row.iter().enumerate() {
            if let Some((true, gap, _)) = o {
                cells[c].successes += 1;
                if gap.is_some_and(|g| g < OPTIMAL_GAP) {
                    cells[c].optimal += 1;
                }
            }
        }
        if row.iter().all(|o| matches!(o, Some((true, Some(_), _)))) {
            mutual += 1;
            for (c, o) in row.iter().enumerate() {
                let (_, gap, time) = o.unwrap();
                gap_sum[c] += gap.unwrap();
                time_sum[c] += time;
            }
        }
    }
    for c in 0..ncols {
        if mutual > 0 {
            cells[c].avg_gap = Some(gap_sum[c] / mutual as f64);
            cells[c].avg_time = Some(time_sum[c] / mutual as f64);
        }
    }
    ReportRow {
        group: group.to_string(),
        instances: members.len(),
        mutual,
        cells,
    }
}

fn table(title: &str, columns: &[String], outcomes: &Outcomes, key: impl Fn(&str) -> Option<(String, String)>) -> ReportTable {
    // (sort key, display) -> members
    let mut groups: BTreeMap<(String, String), Vec<&String>> = BTreeMap::new();
    for name in outcomes.keys() {
        if let Some(k) = key(name) {
            groups.entry(k).or_default().push(name);
        }
    }
    let rows = groups
        .into_iter()
        .map(|((_, display), members)| build_row(&display, &members, outcomes, columns.len()))
        .collect();
    ReportTable {
        title: title.to_string(),
        columns: columns.to_vec(),
        rows,
    }
}

/// Builds the overall table plus one table per available grouping: the
/// group patterns, coverage deciles, the Large predicate and a Difficult
/// list. Instances without a gap source are excluded with a warning.
pub fn build_report(inputs: &ReportInputs<'_>) -> Vec<ReportTable> {
    let mut columns: Vec<String> = Vec::new();
    for r in inputs.records {
        let label = column_label(r);
        if !columns.contains(&label) {
            columns.push(label);
        }
    }
    let mut outcomes: Outcomes = BTreeMap::new();
    let mut excluded: HashSet<String> = HashSet::new();
    for r in inputs.records {
        let col = columns.iter().position(|c| *c == column_label(r)).unwrap();
        let success = r.status == RunStatus::Success;
        let gap = r.gap_permil.or_else(|| {
            let best = inputs.bounds?.get(&r.instance)?;
            gap_permil(r.cost?, best).ok()
        });
        if success && gap.is_none() {
            excluded.insert(r.instance.clone());
        }
        let row = outcomes.entry(r.instance.clone()).or_insert_with(|| vec![None; columns.len()]);
        row.resize(columns.len(), None);
        if row[col].is_none() {
            row[col] = Some((success, gap, r.time_s));
        }
    }
    for row in outcomes.values_mut() {
        row.resize(columns.len(), None);
    }
    for name in &excluded {
        log::warn!("{name}: no bound or gap available; excluded from the report");
        outcomes.remove(name);
    }

    let mut tables = vec![table("All instances", &columns, &outcomes, |_| {
        Some(("all".into(), "All".into()))
    })];
    if let Some(g) = inputs.grouping {
        tables.push(table("Groups", &columns, &outcomes, |name| {
            let group = g.group_of(name).unwrap_or("Other").to_string();
            Some((group.clone(), group))
        }));
    }
    let info = &inputs.info;
    if outcomes.keys().any(|n| info.contains_key(n)) {
        tables.push(table("Coverage", &columns, &outcomes, |name| {
            let i = info.get(name)?;
            let g = coverage_group(i.terminals, i.nodes);
            Some((format!("{g:03}"), coverage_label(i.terminals, i.nodes)))
        }));
        tables.push(table("Size", &columns, &outcomes, |name| {
            let i = info.get(name)?;
            let label = if i.is_large() { "Large" } else { "Other" };
            Some((label.into(), label.into()))
        }));
    }
    if let Some(d) = &inputs.difficult {
        tables.push(table("Difficult", &columns, &outcomes, |name| {
            let label = if d.contains(name) { "Difficult" } else { "Other" };
            Some((label.into(), label.into()))
        }));
    }
    tables
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(instance: &str, algo: &str, cost: Option<f64>, time: f64) -> RunRecord {
        RunRecord {
            instance: instance.into(),
            algo: algo.into(),
            flags: String::new(),
            k: None,
            cost,
            gap_permil: None,
            time_s: time,
            status: if cost.is_some() { RunStatus::Success } else { RunStatus::Timeout },
        }
    }

    #[test]
    fn single_optimal_record() {
        let mut bounds = BoundsTable::default();
        bounds.insert("b01", 2.0);
        let records = vec![rec("b01", "tm", Some(2.0), 0.1)];
        let tables = build_report(&ReportInputs {
            records: &records,
            bounds: Some(&bounds),
            ..Default::default()
        });
        let row = &tables[0].rows[0];
        assert_eq!(row.instances, 1);
        assert_eq!(row.optimal_pct(0), 100.0);
        assert_eq!(row.cells[0].avg_gap, Some(0.0));
    }

    #[test]
    fn head_to_head_uses_mutual_successes() {
        let mut bounds = BoundsTable::default();
        bounds.insert("a", 10.0);
        bounds.insert("b", 10.0);
        let records = vec![
            rec("a", "tm", Some(11.0), 1.0),
            rec("a", "gcf", Some(10.0), 2.0),
            rec("b", "tm", Some(12.0), 1.0),
            rec("b", "gcf", None, 60.0),
        ];
        let tables = build_report(&ReportInputs {
            records: &records,
            bounds: Some(&bounds),
            ..Default::default()
        });
        let row = &tables[0].rows[0];
        assert_eq!(row.mutual, 1);
        assert!((row.cells[0].avg_gap.unwrap() - 100.0).abs() < 1e-9);
        assert_eq!(row.success_pct(1), 50.0);
        assert!(tables[0].to_markdown().contains("| All | 2 | 1 |"));
    }

    #[test]
    fn grouping_file() {
        let g = Grouping::parse("# comment\n^b\\d+$\tRandomSparse\n^e\tRandomSparse2\n").unwrap();
        assert_eq!(g.group_of("b07"), Some("RandomSparse"));
        assert_eq!(g.group_of("e01"), Some("RandomSparse2"));
        assert_eq!(g.group_of("x"), None);
        assert!(Grouping::parse("nope").is_err());
    }
}
