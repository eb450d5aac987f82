//! Shortest paths with terminal-avoidance policies.
//!
//! Full components must not contain inner terminals, so every recorded
//! shortest path carries a validity flag: a pair is valid iff the recorded
//! path has no terminal strictly between its endpoints.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered::OrdF64;
use thiserror::Error;

use super::Instance;
use crate::numeric::approx_eq;

const NO_PRED: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistMode {
    /// Rows from every node.
    Apsp,
    /// Rows from terminals only; pairs of two nonterminals are missing.
    Sssp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathPolicy {
    /// Searches never continue through a terminal, so every reached pair is valid.
    Forbid,
    /// Plain shortest paths; a pair is invalidated when any shortest path
    /// between its endpoints passes through a terminal.
    Prefer,
}

impl DistMode {
    /// Density rule of thumb for `k = 3`: sssp iff `|E| / C(|V|,2) <= 0.25`.
    pub fn auto(inst: &Instance, k: usize) -> DistMode {
        if k <= 3 && inst.density() <= 0.25 {
            DistMode::Sssp
        } else {
            DistMode::Apsp
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no distance recorded for pair ({0}, {1}) under sssp mode")]
    MissingPair(usize, usize),
}

#[derive(Debug, Clone)]
struct Row {
    dist: Vec<f64>,
    /// `(predecessor node, edge id)` on the recorded path from the row source.
    pred: Vec<(usize, usize)>,
    valid: Vec<bool>,
}

/// Precomputed shortest-path rows with per-pair validity.
///
/// Immutable after construction; safe to share between threads.
#[derive(Debug, Clone)]
pub struct DistanceOracle {
    mode: DistMode,
    policy: PathPolicy,
    rows: Vec<Option<Row>>,
}

impl DistanceOracle {
    pub fn build(inst: &Instance, mode: DistMode, policy: PathPolicy) -> Self {
        let n = inst.node_count();
        let sources: Vec<usize> = match mode {
            DistMode::Apsp => (0..n).collect(),
            DistMode::Sssp => inst.terminals().to_vec(),
        };
        let mut rows: Vec<Option<Row>> = vec![None; n];
        for &s in &sources {
            let (dist, pred) = dijkstra(inst, s, policy == PathPolicy::Forbid);
            let valid = dist.iter().map(|d| d.is_finite()).collect();
            rows[s] = Some(Row { dist, pred, valid });
        }

        if policy == PathPolicy::Prefer {
            // A pair (u, v) is invalid iff some terminal t outside {u, v}
            // satisfies d(u, t) + d(t, v) = d(u, v). Terminal rows exist in
            // both modes, so d(t, v) is always available.
            let terminals = inst.terminals();
            let mut invalid: Vec<(usize, usize)> = Vec::new();
            for &s in &sources {
                let row = rows[s].as_ref().unwrap();
                for v in 0..n {
                    if v == s {
                        continue;
                    }
                    let duv = row.dist[v];
                    let through_terminal = terminals.iter().any(|&t| {
                        if t == s || t == v {
                            return false;
                        }
                        let dut = row.dist[t];
                        let dtv = rows[t].as_ref().unwrap().dist[v];
                        approx_eq(dut + dtv, duv)
                    });
                    if through_terminal {
                        invalid.push((s, v));
                    }
                }
            }
            for (s, v) in invalid {
                rows[s].as_mut().unwrap().valid[v] = false;
            }
        }

        DistanceOracle { mode, policy, rows }
    }

    pub fn mode(&self) -> DistMode {
        self.mode
    }

    pub fn policy(&self) -> PathPolicy {
        self.policy
    }

    fn row_for(&self, u: usize, v: usize) -> Option<(&Row, usize, bool)> {
        if let Some(row) = &self.rows[u] {
            Some((row, v, false))
        } else {
            self.rows[v].as_ref().map(|row| (row, u, true))
        }
    }

    pub fn has_pair(&self, u: usize, v: usize) -> bool {
        self.rows[u].is_some() || self.rows[v].is_some()
    }

    /// Recorded distance, `+inf` for pairs disconnected under forbid.
    pub fn distance(&self, u: usize, v: usize) -> Result<f64, OracleError> {
        if u == v {
            return Ok(0.0);
        }
        self.row_for(u, v)
            .map(|(row, target, _)| row.dist[target])
            .ok_or(OracleError::MissingPair(u, v))
    }

    pub fn is_valid(&self, u: usize, v: usize) -> bool {
        if u == v {
            return true;
        }
        match (&self.rows[u], &self.rows[v]) {
            (Some(a), Some(b)) => a.valid[v] && b.valid[u],
            (Some(a), None) => a.valid[v],
            (None, Some(b)) => b.valid[u],
            (None, None) => false,
        }
    }

    /// Distance of a valid pair, `None` if the pair is missing or invalid.
    pub fn valid_distance(&self, u: usize, v: usize) -> Option<f64> {
        if self.is_valid(u, v) {
            self.distance(u, v).ok()
        } else {
            None
        }
    }

    /// Edge ids of the recorded path, ordered from `u` to `v`.
    pub fn path_edges(&self, u: usize, v: usize) -> Result<Vec<usize>, OracleError> {
        if u == v {
            return Ok(Vec::new());
        }
        let (row, target, reversed) = self.row_for(u, v).ok_or(OracleError::MissingPair(u, v))?;
        let mut edges = Vec::new();
        let mut x = target;
        while row.pred[x].0 != NO_PRED {
            let (p, e) = row.pred[x];
            edges.push(e);
            x = p;
        }
        if !reversed {
            edges.reverse();
        }
        Ok(edges)
    }

    /// Node sequence of the recorded path from `u` to `v`, inclusive.
    pub fn path_nodes(&self, inst: &Instance, u: usize, v: usize) -> Result<Vec<usize>, OracleError> {
        let edges = self.path_edges(u, v)?;
        let mut nodes = Vec::with_capacity(edges.len() + 1);
        nodes.push(u);
        let mut x = u;
        for e in edges {
            x = inst.edge(e).other(x);
            nodes.push(x);
        }
        Ok(nodes)
    }

    /// Fraction of unordered terminal pairs that are valid.
    pub fn valid_terminal_pair_fraction(&self, inst: &Instance) -> f64 {
        let r = inst.terminals();
        let mut total = 0usize;
        let mut valid = 0usize;
        for (i, &a) in r.iter().enumerate() {
            for &b in &r[i + 1..] {
                total += 1;
                if self.is_valid(a, b) {
                    valid += 1;
                }
            }
        }
        if total == 0 {
            1.0
        } else {
            valid as f64 / total as f64
        }
    }

    pub fn invalid_terminal_pairs(&self, inst: &Instance) -> usize {
        let r = inst.terminals();
        let mut count = 0;
        for (i, &a) in r.iter().enumerate() {
            for &b in &r[i + 1..] {
                if !self.is_valid(a, b) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Dijkstra from `source`. With `stop_at_terminals`, terminals other than
/// the source are reached but never expanded. Ties keep the predecessor
/// with the lower node index.
pub(crate) fn dijkstra(
    inst: &Instance,
    source: usize,
    stop_at_terminals: bool,
) -> (Vec<f64>, Vec<(usize, usize)>) {
    let n = inst.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![(NO_PRED, NO_PRED); n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse((OrdF64(0.0), source)));
    while let Some(Reverse((OrdF64(d), x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        if stop_at_terminals && x != source && inst.is_terminal(x) {
            continue;
        }
        for &(w, e) in inst.neighbors(x) {
            if done[w] {
                continue;
            }
            let cand = d + inst.edge(e).cost;
            if cand < dist[w] || (cand == dist[w] && x < pred[w].0) {
                dist[w] = cand;
                pred[w] = (x, e);
                heap.push(Reverse((OrdF64(cand), w)));
            }
        }
    }
    (dist, pred)
}

pub(crate) mod ordered {
    use std::cmp::Ordering;

    /// Total order on finite-or-infinite costs for heap keys.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct OrdF64(pub f64);

    impl Eq for OrdF64 {}

    impl PartialOrd for OrdF64 {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    impl Ord for OrdF64 {
        fn cmp(&self, other: &Self) -> Ordering {
            self.0.total_cmp(&other.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Instance {
        Instance::new(3, [(0, 1, 1.0), (1, 2, 1.0)], [0, 2]).unwrap()
    }

    // t1=0, t2=1, t3=2, v=3: path t1-t2-t3 plus v adjacent to t1 and t3.
    fn tie_through_terminal() -> Instance {
        Instance::new(
            4,
            [(0, 1, 1.0), (1, 2, 1.0), (0, 3, 1.0), (3, 2, 1.0)],
            [0, 1, 2],
        )
        .unwrap()
    }

    #[test]
    fn plain_path_is_valid() {
        let inst = path3();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        assert_eq!(o.distance(0, 2).unwrap(), 2.0);
        assert!(o.is_valid(0, 2));
        assert_eq!(o.path_edges(0, 2).unwrap(), vec![0, 1]);
        assert_eq!(o.path_edges(2, 0).unwrap(), vec![1, 0]);
    }

    #[test]
    fn prefer_invalidates_tie_through_terminal() {
        let inst = tie_through_terminal();
        let prefer = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Prefer);
        assert_eq!(prefer.distance(0, 2).unwrap(), 2.0);
        assert!(!prefer.is_valid(0, 2));

        let forbid = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Forbid);
        assert_eq!(forbid.distance(0, 2).unwrap(), 2.0);
        assert!(forbid.is_valid(0, 2));
        assert_eq!(forbid.path_nodes(&inst, 0, 2).unwrap(), vec![0, 3, 2]);
    }

    #[test]
    fn forbid_disconnection_is_infinite_and_invalid() {
        // 0 - 1 - 2 with 1 a terminal: 0 and 2 only connect through it.
        let inst = Instance::new(3, [(0, 1, 1.0), (1, 2, 1.0)], [0, 1, 2]).unwrap();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Forbid);
        assert!(o.distance(0, 2).unwrap().is_infinite());
        assert!(!o.is_valid(0, 2));
        assert!(o.is_valid(0, 1));
    }

    #[test]
    fn sssp_misses_nonterminal_pairs() {
        let inst = Instance::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], [0, 3]).unwrap();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        assert_eq!(o.distance(1, 2), Err(OracleError::MissingPair(1, 2)));
        assert_eq!(o.distance(2, 0).unwrap(), 2.0);
        assert!(!o.has_pair(1, 2));
    }
}
