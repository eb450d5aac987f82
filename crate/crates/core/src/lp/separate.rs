//! Finding violated subtour and clique constraints for a fractional point.

use std::collections::{BTreeMap, HashMap};

use crate::graph::{FlowNetwork, UnionFind};

use super::model::{Cut, LpSolution, SerModel};
use super::simplex::TAU;
use super::LpError;

/// Directed network whose minimum `s`–`{r, t}` cuts expose the most
/// violated subtour constraint containing terminal `r`.
///
/// Every support component gets a private hub `z_C`: arcs `s -> r_C`,
/// `r_C -> z_C` and `z_C -> w` for its other terminals `w`, all with
/// capacity `x_C`. Each terminal `r` has an arc `r -> t` of capacity
/// `y_r - 1`. A cut with terminal sink side `R'` then costs
/// `sum_{C ∩ R' ≠ ∅} x_C + sum_{r ∉ R'} (y_r - 1)`.
#[derive(Debug, Clone)]
pub struct SeparationNetwork {
    pub network: FlowNetwork,
    pub source: usize,
    pub sink: usize,
    /// Network node per model terminal, in terminal order.
    pub terminal_nodes: Vec<usize>,
    /// `sum_r y_r - |R| + 1`: cuts below this value are violated.
    pub threshold: f64,
}

impl SeparationNetwork {
    pub fn build(model: &SerModel, sol: &LpSolution) -> Self {
        let m = model.terminals.len();
        let mut network = FlowNetwork::new(2 + m);
        let (source, sink) = (0, 1);
        let node: HashMap<usize, usize> = model.terminals.iter().enumerate().map(|(i, &t)| (t, 2 + i)).collect();
        for i in sol.support() {
            let c = &model.components[i];
            let x = sol.values[i];
            let root = node[&c.terminals[0]];
            network.add_arc(source, root, x);
            if c.terminals.len() == 2 {
                network.add_arc(root, node[&c.terminals[1]], x);
            } else {
                let hub = network.add_node();
                network.add_arc(root, hub, x);
                for t in &c.terminals[1..] {
                    network.add_arc(hub, node[t], x);
                }
            }
        }
        for (i, &y) in sol.coverage.iter().enumerate() {
            network.add_arc(2 + i, sink, (y - 1.0).max(0.0));
        }
        let threshold = sol.coverage.iter().sum::<f64>() - m as f64 + 1.0;
        SeparationNetwork {
            network,
            source,
            sink,
            terminal_nodes: (0..m).map(|i| 2 + i).collect(),
            threshold,
        }
    }

    /// Minimum cut forcing terminal `i` to the sink side: `(value, R')`.
    pub fn cut_for(&self, i: usize, model: &SerModel) -> (f64, Vec<usize>) {
        let res = self.network.max_flow(self.source, &[self.terminal_nodes[i], self.sink]);
        let set = self
            .terminal_nodes
            .iter()
            .enumerate()
            .filter(|&(_, &v)| res.sink_side[v])
            .map(|(j, _)| model.terminals[j])
            .collect();
        (res.value, set)
    }
}

fn check_coverage(model: &SerModel, sol: &LpSolution) -> Result<(), LpError> {
    for (i, &y) in sol.coverage.iter().enumerate() {
        if y < 1.0 - TAU {
            return Err(LpError::CoverageBelowOne {
                terminal: model.terminals[i],
                coverage: y,
            });
        }
    }
    Ok(())
}

/// Terminal sets of the connected components of the support hypergraph.
pub fn support_classes(model: &SerModel, sol: &LpSolution) -> Vec<Vec<usize>> {
    let pos: HashMap<usize, usize> = model.terminals.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut uf = UnionFind::new(model.terminals.len());
    for i in sol.support() {
        let ts = &model.components[i].terminals;
        for t in &ts[1..] {
            uf.union(pos[&ts[0]], pos[t]);
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &t) in model.terminals.iter().enumerate() {
        classes.entry(uf.find(i)).or_default().push(t);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort();
    out
}

/// Violated subtour constraints at `sol`. With `consep`, a disconnected
/// support yields one constraint per connected class of two or more
/// terminals and no flow computation; otherwise one minimum cut per
/// terminal is computed.
pub fn separate(model: &SerModel, sol: &LpSolution, consep: bool) -> Result<Vec<Cut>, LpError> {
    check_coverage(model, sol)?;
    if consep {
        let classes = support_classes(model, sol);
        if classes.len() > 1 {
            let cuts: Vec<Cut> = classes.into_iter().filter(|c| c.len() >= 2).map(Cut::Subtour).collect();
            if cuts.iter().any(|c| model.violation(c, &sol.values) > TAU) {
                return Ok(cuts);
            }
        }
    }
    let net = SeparationNetwork::build(model, sol);
    let m = model.terminals.len();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(m).max(1);
    let cuts: Vec<(f64, Vec<usize>)> = if workers == 1 || m < 16 {
        (0..m).map(|i| net.cut_for(i, model)).collect()
    } else {
        let chunk = m.div_ceil(workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..m)
                .step_by(chunk)
                .map(|lo| {
                    let net = &net;
                    s.spawn(move || (lo..(lo + chunk).min(m)).map(|i| net.cut_for(i, model)).collect::<Vec<_>>())
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("separation worker panicked")).collect()
        })
    };
    let mut out: Vec<Cut> = Vec::new();
    for (value, set) in cuts {
        if set.len() < 2 || value >= net.threshold - TAU {
            continue;
        }
        let cut = Cut::Subtour(set);
        if model.violation(&cut, &sol.values) > TAU && !out.contains(&cut) {
            out.push(cut);
        }
    }
    Ok(out)
}

/// Violated clique constraints: cliques of up to `max_size` support
/// components that pairwise share at least two terminals.
pub fn separate_cliques(model: &SerModel, sol: &LpSolution, max_size: usize) -> Vec<Cut> {
    let support = sol.support();
    let conflict = |a: usize, b: usize| {
        let (ta, tb) = (&model.components[a].terminals, &model.components[b].terminals);
        ta.iter().filter(|t| tb.binary_search(t).is_ok()).count() >= 2
    };
    let s = support.len();
    let adj: Vec<Vec<bool>> = (0..s)
        .map(|i| (0..s).map(|j| i != j && conflict(support[i], support[j])).collect())
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn grow(
        start: usize,
        stack: &mut Vec<usize>,
        sum: f64,
        adj: &[Vec<bool>],
        support: &[usize],
        sol: &LpSolution,
        model: &SerModel,
        max_size: usize,
        out: &mut Vec<Cut>,
    ) {
        let mut extended = false;
        if stack.len() < max_size {
            for j in start..adj.len() {
                if stack.iter().all(|&i| adj[i][j]) {
                    extended = true;
                    stack.push(j);
                    grow(j + 1, stack, sum + sol.values[support[j]], adj, support, sol, model, max_size, out);
                    stack.pop();
                }
            }
        }
        // Report only cliques that cannot be extended by a later member.
        if !extended && stack.len() >= 2 && sum > 1.0 + TAU {
            let mut members: Vec<Vec<usize>> = stack.iter().map(|&i| model.components[support[i]].terminals.clone()).collect();
            members.sort();
            out.push(Cut::Clique(members));
        }
    }
    grow(0, &mut stack, 0.0, &adj, &support, sol, model, max_size, &mut out);
    out
}
