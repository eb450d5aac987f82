//! Dreyfus–Wagner dynamic program in its graph form: `S[X][v]` is the cost
//! of a cheapest tree connecting terminal subset `X` and node `v`.
//!
//! Full mode yields an optimal Steiner tree; restricted mode yields optimal
//! trees for every terminal subset up to a size limit.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

use crate::budget::{Deadline, Interrupted};
use crate::components::for_each_subset;
use crate::graph::paths::ordered::OrdF64;
use crate::graph::Instance;
use crate::two_approx::{prune_to_steiner_tree, SteinerTree};

const MAX_TERMINALS: usize = 128;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("{terminals} terminals with subset limit {limit} exceeds the table guard (set force to override)")]
    Guard { terminals: usize, limit: usize },
    #[error("table would need {entries} entries, cap is {cap}")]
    TableLimit { entries: u128, cap: u128 },
    #[error("at most {MAX_TERMINALS} terminals are supported, got {0}")]
    TooManyTerminals(usize),
    #[error(transparent)]
    Interrupted(#[from] Interrupted),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Upper bound on `subsets * |V|` table entries.
    pub max_entries: u128,
    /// Skip the `|R| > 24 && limit >= 6` guard.
    pub force: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            max_entries: 200_000_000,
            force: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Back {
    None,
    Root,
    Edge { from: usize, edge: usize },
    Merge(u128),
}

struct Table {
    rows: HashMap<u128, usize>,
    cost: Vec<Vec<f64>>,
    back: Vec<Vec<Back>>,
}

fn binomial_sum(n: usize, limit: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for i in 1..=limit.min(n) {
        c = c * (n - i + 1) as u128 / i as u128;
        total += c;
    }
    total
}

/// Runs the recursion over all subsets of `ts` with at most `limit` members.
fn build(inst: &Instance, ts: &[usize], limit: usize, opts: &ExactOptions, deadline: &Deadline) -> Result<Table, ExactError> {
    if ts.len() > MAX_TERMINALS {
        return Err(ExactError::TooManyTerminals(ts.len()));
    }
    let subsets = binomial_sum(ts.len(), limit);
    let entries = subsets * inst.node_count() as u128;
    if entries > opts.max_entries {
        return Err(ExactError::TableLimit {
            entries,
            cap: opts.max_entries,
        });
    }
    let n = inst.node_count();
    let mut table = Table {
        rows: HashMap::with_capacity(subsets as usize),
        cost: Vec::with_capacity(subsets as usize),
        back: Vec::with_capacity(subsets as usize),
    };
    let positions: Vec<usize> = (0..ts.len()).collect();
    for size in 1..=limit.min(ts.len()) {
        for_each_subset(&positions, size, |members| -> Result<(), ExactError> {
            deadline.check()?;
            let mask: u128 = members.iter().fold(0, |m, &i| m | (1u128 << i));
            let mut cost = vec![f64::INFINITY; n];
            let mut back = vec![Back::None; n];
            if size == 1 {
                cost[ts[members[0]]] = 0.0;
                back[ts[members[0]]] = Back::Root;
            } else {
                let low = mask & mask.wrapping_neg();
                let rest = mask ^ low;
                // Proper submasks containing the lowest member, each split once.
                let mut sub = rest;
                loop {
                    sub = sub.wrapping_sub(1) & rest;
                    let a = sub | low;
                    if a != mask {
                        let ra = table.rows[&a];
                        let rb = table.rows[&(mask ^ a)];
                        let (ca, cb) = (&table.cost[ra], &table.cost[rb]);
                        for v in 0..n {
                            let cand = ca[v] + cb[v];
                            if cand < cost[v] {
                                cost[v] = cand;
                                back[v] = Back::Merge(a);
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                }
            }
            propagate(inst, &mut cost, &mut back);
            table.rows.insert(mask, table.cost.len());
            table.cost.push(cost);
            table.back.push(back);
            Ok(())
        })?;
    }
    Ok(table)
}

fn propagate(inst: &Instance, cost: &mut [f64], back: &mut [Back]) {
    let mut heap: BinaryHeap<Reverse<(OrdF64, usize)>> = cost
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_finite())
        .map(|(v, &c)| Reverse((OrdF64(c), v)))
        .collect();
    let mut done = vec![false; cost.len()];
    while let Some(Reverse((OrdF64(d), v))) = heap.pop() {
        if done[v] || d > cost[v] {
            continue;
        }
        done[v] = true;
        for &(w, e) in inst.neighbors(v) {
            let cand = d + inst.edge(e).cost;
            if cand < cost[w] {
                cost[w] = cand;
                back[w] = Back::Edge { from: v, edge: e };
                heap.push(Reverse((OrdF64(cand), w)));
            }
        }
    }
}

fn collect_edges(table: &Table, mask: u128, v: usize, out: &mut Vec<usize>) {
    let mut stack = vec![(mask, v)];
    while let Some((mask, v)) = stack.pop() {
        let row = table.rows[&mask];
        match table.back[row][v] {
            Back::None | Back::Root => {}
            Back::Edge { from, edge } => {
                out.push(edge);
                stack.push((mask, from));
            }
            Back::Merge(a) => {
                stack.push((a, v));
                stack.push((mask ^ a, v));
            }
        }
    }
}

/// Optimal Steiner tree by the full recursion.
pub fn dreyfus_wagner(inst: &Instance, opts: &ExactOptions, deadline: &Deadline) -> Result<SteinerTree, ExactError> {
    let r = inst.terminals();
    let (&root, rest) = r.split_last().expect("instances have at least two terminals");
    let table = build(inst, rest, rest.len(), opts, deadline)?;
    let full: u128 = if rest.len() == 128 { u128::MAX } else { (1u128 << rest.len()) - 1 };
    let mut edges = Vec::new();
    collect_edges(&table, full, root, &mut edges);
    Ok(prune_to_steiner_tree(inst, &edges, r).expect("table trees connect their terminals"))
}

/// Optimal cost for the instance's terminals.
pub fn exact_cost(inst: &Instance) -> Result<f64, ExactError> {
    Ok(dreyfus_wagner(inst, &ExactOptions::default(), &Deadline::none())?.cost)
}

/// Optimal trees (as instance edge ids) for every terminal subset of size
/// `2..=limit`, each paired with its sorted terminal list.
pub fn restricted_trees(
    inst: &Instance,
    limit: usize,
    opts: &ExactOptions,
    deadline: &Deadline,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>, ExactError> {
    let r = inst.terminals();
    if !opts.force && r.len() > 24 && limit >= 6 {
        return Err(ExactError::Guard {
            terminals: r.len(),
            limit,
        });
    }
    let table = build(inst, r, limit, opts, deadline)?;
    let mut masks: Vec<(&u128, &usize)> = table.rows.iter().collect();
    masks.sort_by_key(|(m, _)| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
    let mut out = Vec::new();
    for (&mask, _) in masks {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..r.len()).filter(|&i| mask >> i & 1 == 1).map(|i| r[i]).collect();
        let low = members[0];
        let mut edges = Vec::new();
        collect_edges(&table, mask, low, &mut edges);
        let tree = prune_to_steiner_tree(inst, &edges, &members).expect("table trees connect their terminals");
        out.push((members, tree.edges));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_terminals_shortest_path() {
        let inst = Instance::new(4, [(0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.5), (2, 3, 1.0)], [0, 3]).unwrap();
        assert_eq!(exact_cost(&inst).unwrap(), 2.0);
    }

    #[test]
    fn star_optimum() {
        let inst = Instance::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.9), (2, 3, 1.9)], [1, 2, 3]).unwrap();
        let t = dreyfus_wagner(&inst, &ExactOptions::default(), &Deadline::none()).unwrap();
        assert_eq!(t.cost, 3.0);
        t.validate(&inst, inst.terminals()).unwrap();
    }

    #[test]
    fn restricted_covers_all_small_subsets() {
        let inst = Instance::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], [1, 2, 3]).unwrap();
        let trees = restricted_trees(&inst, 3, &ExactOptions::default(), &Deadline::none()).unwrap();
        let sets: Vec<Vec<usize>> = trees.iter().map(|(t, _)| t.clone()).collect();
        assert_eq!(sets, vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]]);
        assert_eq!(inst.total_cost(&trees[3].1), 3.0);
    }

    #[test]
    fn guard_and_cap() {
        let n = 30;
        let edges: Vec<(usize, usize, f64)> = (1..n).map(|i| (0, i, 1.0)).collect();
        let inst = Instance::new(n, edges, 1..n).unwrap();
        assert!(matches!(
            restricted_trees(&inst, 6, &ExactOptions::default(), &Deadline::none()),
            Err(ExactError::Guard { .. })
        ));
        let tiny = ExactOptions { max_entries: 10, force: true };
        assert!(matches!(
            restricted_trees(&inst, 2, &tiny, &Deadline::none()),
            Err(ExactError::TableLimit { .. })
        ));
    }
}
