//! Greedy contraction framework: repeatedly pick the full component with
//! the best win against the current terminal MST and contract it, either
//! fully (all its terminals merged) or along its loss forest.

mod save;
mod state;

use std::cmp::Ordering;

use thiserror::Error;

use crate::budget::{Deadline, Interrupted};
use crate::components::{ComponentSet, FullComponent, MetricEdge};
use crate::graph::paths::dijkstra;
use crate::graph::{DistanceOracle, Instance, OracleError};
use crate::numeric::definitely_less;
use crate::two_approx::{prune_to_steiner_tree, tm_with, SteinerTree};

pub use save::{DynamicOracle, MatrixOracle, SaveKind, SaveOracle, StaticOracle};
pub use state::{ContractionState, EdgeOrigin, TreeEdge};

/// Win function used to rank components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WinKind {
    /// `save - d(C)`
    Abs,
    /// `save / d(C)`
    Rel,
    /// `(save - d(C)) / d(Loss(C))`
    Loss,
}

impl WinKind {
    pub fn name(self) -> &'static str {
        match self {
            WinKind::Abs => "abs",
            WinKind::Rel => "rel",
            WinKind::Loss => "loss",
        }
    }
}

/// What happens to the terminal metric when a component is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Contraction {
    /// Zero-cost edges between the component's terminals.
    Full,
    /// The component's core edges, re-attached to their loss-forest owners.
    Loss,
}

/// How the final Steiner tree is assembled from the chosen components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assembly {
    /// TM on the terminals plus all inner nodes of chosen components, then
    /// pruning back to the terminals.
    Tm,
    /// Chosen components plus the remaining metric MST edges, expanded into
    /// shortest paths, then MST and pruning.
    MstUnion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcfOptions {
    pub win: WinKind,
    pub save: SaveKind,
    pub contraction: Contraction,
    /// Drop components from the candidate list once they stop being promising.
    pub reduce: bool,
    /// Rank once by the initial win and make a single pass.
    pub singlepass: bool,
    pub assembly: Assembly,
}

impl Default for GcfOptions {
    fn default() -> Self {
        GcfOptions {
            win: WinKind::Rel,
            save: SaveKind::Static,
            contraction: Contraction::Full,
            reduce: true,
            singlepass: false,
            assembly: Assembly::Tm,
        }
    }
}

impl GcfOptions {
    /// Loss-contracting algorithm: loss win with loss contraction.
    pub fn lca() -> Self {
        GcfOptions {
            win: WinKind::Loss,
            contraction: Contraction::Loss,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GcfError {
    #[error("on-demand generation only supports the absolute win")]
    OnDemandWin,
    #[error("on-demand generation needs terminal distance rows")]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Interrupted(#[from] Interrupted),
}

/// One contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct GcfStep {
    pub terminals: Vec<usize>,
    pub win: f64,
    pub save: f64,
    pub cost: f64,
    /// MST cost of the terminal metric after the contraction.
    pub mst_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcfResult {
    pub tree: SteinerTree,
    pub chosen: Vec<FullComponent>,
    pub steps: Vec<GcfStep>,
    /// `d(MST(G_R))` over the terminal metric before any contraction.
    pub initial_mst: f64,
    pub final_mst: f64,
    /// Number of win evaluations.
    pub evaluations: usize,
}

/// Win of a component with the given save, cost and loss cost.
pub fn win_value(kind: WinKind, save: f64, cost: f64, loss_cost: f64) -> f64 {
    let gain = save - cost;
    match kind {
        WinKind::Abs => gain,
        WinKind::Rel => {
            if cost > 0.0 {
                save / cost
            } else if save > 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        }
        WinKind::Loss => {
            if loss_cost > 0.0 {
                gain / loss_cost
            } else if gain > 0.0 {
                f64::INFINITY
            } else {
                gain
            }
        }
    }
}

/// A component is promising when contracting it lowers `d(MST) + d(C)`,
/// which is `win > 0` for the absolute and loss wins and `win > 1` for the
/// relative one.
pub fn is_promising(save: f64, cost: f64) -> bool {
    definitely_less(cost, save)
}

/// Terminal metric of the instance: plain shortest-path distances.
pub fn terminal_metric(inst: &Instance, deadline: &Deadline) -> Result<Vec<Vec<f64>>, Interrupted> {
    let r = inst.terminals();
    let mut rows = Vec::with_capacity(r.len());
    for &t in r {
        deadline.check()?;
        let (dist, _) = dijkstra(inst, t, false);
        rows.push(r.iter().map(|&s| dist[s]).collect());
    }
    Ok(rows)
}

fn local_ids(inst: &Instance, terminals: &[usize]) -> Vec<usize> {
    let r = inst.terminals();
    terminals
        .iter()
        .map(|t| r.binary_search(t).expect("component terminals are instance terminals"))
        .collect()
}

struct Candidate {
    comp: usize,
    win: f64,
    save: f64,
}

/// Higher win, then lower cost, then lower terminal tuple.
fn better(a: &Candidate, b: &Candidate, comps: &[FullComponent]) -> bool {
    let (ca, cb) = (&comps[a.comp], &comps[b.comp]);
    match a.win.total_cmp(&b.win) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match ca.cost.total_cmp(&cb.cost) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => ca.terminals < cb.terminals,
        },
    }
}

struct Runner<'a> {
    inst: &'a Instance,
    opts: GcfOptions,
    state: ContractionState,
    chosen: Vec<FullComponent>,
    steps: Vec<GcfStep>,
    evaluations: usize,
}

impl<'a> Runner<'a> {
    fn new(inst: &'a Instance, opts: GcfOptions, deadline: &Deadline) -> Result<Self, Interrupted> {
        let metric = terminal_metric(inst, deadline)?;
        let state = ContractionState::from_metric(metric.len(), |i, j| metric[i][j], opts.save);
        Ok(Runner {
            inst,
            opts,
            state,
            chosen: Vec::new(),
            steps: Vec::new(),
            evaluations: 0,
        })
    }

    fn evaluate(&mut self, comp: &FullComponent, local: &[usize]) -> (f64, f64) {
        self.evaluations += 1;
        let save = self.state.save(local);
        (win_value(self.opts.win, save, comp.cost, comp.loss_cost), save)
    }

    fn contract(&mut self, comp: &FullComponent, local: &[usize], win: f64, save: f64) {
        let tag = self.chosen.len();
        match self.opts.contraction {
            Contraction::Full => {
                self.state.contract_full(local, tag);
            }
            Contraction::Loss => {
                let owner = comp.loss_owner();
                let r = self.inst.terminals();
                let edges: Vec<(usize, usize, f64)> = comp
                    .core_edges(crate::components::CoreChoice::LossComplement)
                    .into_iter()
                    .map(|i| {
                        let e = &comp.edges[i];
                        let a = r.binary_search(&owner[&e.a]).unwrap();
                        let b = r.binary_search(&owner[&e.b]).unwrap();
                        (a, b, e.cost)
                    })
                    .collect();
                self.state.contract(&edges, tag);
            }
        }
        log::debug!(
            "contract {:?} win={} save={} cost={} mst={}",
            comp.terminals,
            win,
            save,
            comp.cost,
            self.state.mst_cost()
        );
        self.steps.push(GcfStep {
            terminals: comp.terminals.clone(),
            win,
            save,
            cost: comp.cost,
            mst_after: self.state.mst_cost(),
        });
        self.chosen.push(comp.clone());
    }

    fn finish(self, initial_mst: f64, deadline: &Deadline) -> Result<GcfResult, Interrupted> {
        let r = self.inst.terminals();
        let tree = match self.opts.assembly {
            Assembly::Tm => {
                let mut aug: Vec<usize> = r.to_vec();
                for c in &self.chosen {
                    aug.extend_from_slice(&c.inner);
                }
                aug.sort_unstable();
                aug.dedup();
                let t = tm_with(self.inst, &aug, deadline)?;
                prune_to_steiner_tree(self.inst, &t.edges, r).expect("TM tree spans the terminals")
            }
            Assembly::MstUnion => {
                let mut edges: Vec<usize> = self.chosen.iter().flat_map(|c| c.expand()).collect();
                for e in self.state.tree() {
                    if e.origin == EdgeOrigin::Metric {
                        deadline.check()?;
                        edges.extend(shortest_path(self.inst, r[e.a], r[e.b]));
                    }
                }
                prune_to_steiner_tree(self.inst, &edges, r).expect("union spans the terminals")
            }
        };
        Ok(GcfResult {
            tree,
            initial_mst,
            final_mst: self.state.mst_cost(),
            chosen: self.chosen,
            steps: self.steps,
            evaluations: self.evaluations,
        })
    }
}

fn shortest_path(inst: &Instance, s: usize, t: usize) -> Vec<usize> {
    let (_, pred) = dijkstra(inst, s, false);
    let mut out = Vec::new();
    let mut x = t;
    while x != s {
        let (p, e) = pred[x];
        out.push(e);
        x = p;
    }
    out
}

/// Runs the greedy contraction over the components of `set` (components
/// with fewer than three terminals are ignored; the MST already covers them).
pub fn run_gcf(inst: &Instance, set: &ComponentSet, opts: &GcfOptions, deadline: &Deadline) -> Result<GcfResult, GcfError> {
    let mut runner = Runner::new(inst, *opts, deadline)?;
    let initial_mst = runner.state.mst_cost();
    let comps: Vec<FullComponent> = set.components().iter().filter(|c| c.size() >= 3).cloned().collect();
    let locals: Vec<Vec<usize>> = comps.iter().map(|c| local_ids(inst, &c.terminals)).collect();

    if opts.singlepass {
        let mut order: Vec<Candidate> = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            let (win, save) = runner.evaluate(c, &locals[i]);
            if !(opts.reduce && !is_promising(save, c.cost)) {
                order.push(Candidate { comp: i, win, save });
            }
        }
        order.sort_by(|a, b| {
            if better(a, b, &comps) {
                Ordering::Less
            } else if better(b, a, &comps) {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        });
        for cand in order {
            deadline.check()?;
            let c = &comps[cand.comp];
            let (win, save) = runner.evaluate(c, &locals[cand.comp]);
            if is_promising(save, c.cost) {
                runner.contract(c, &locals[cand.comp], win, save);
            }
        }
        return Ok(runner.finish(initial_mst, deadline)?);
    }

    let mut alive: Vec<usize> = (0..comps.len()).collect();
    loop {
        deadline.check()?;
        let mut best: Option<Candidate> = None;
        let mut keep = Vec::with_capacity(alive.len());
        for &i in &alive {
            let c = &comps[i];
            let (win, save) = runner.evaluate(c, &locals[i]);
            if !is_promising(save, c.cost) {
                if !opts.reduce {
                    keep.push(i);
                }
                continue;
            }
            keep.push(i);
            let cand = Candidate { comp: i, win, save };
            if best.as_ref().is_none_or(|b| better(&cand, b, &comps)) {
                best = Some(cand);
            }
        }
        alive = keep;
        let Some(best) = best else { break };
        alive.retain(|&i| i != best.comp);
        runner.contract(&comps[best.comp], &locals[best.comp], best.win, best.save);
    }
    Ok(runner.finish(initial_mst, deadline)?)
}

/// Greedy contraction over 3-components generated on demand. For every
/// nonterminal `v` the candidate star joins `v` to its nearest terminal
/// `s0`, the terminal `s1` maximising `bottleneck(s0, s1) - d(v, s1)`, and
/// the terminal `s2` maximising the absolute win of `{s0, s1, s2}`.
pub fn run_gcf_ondemand(
    inst: &Instance,
    oracle: &DistanceOracle,
    opts: &GcfOptions,
    deadline: &Deadline,
) -> Result<GcfResult, GcfError> {
    if opts.win != WinKind::Abs {
        return Err(GcfError::OnDemandWin);
    }
    let mut runner = Runner::new(inst, *opts, deadline)?;
    let initial_mst = runner.state.mst_cost();
    let r = inst.terminals().to_vec();
    let nonterminals: Vec<usize> = inst.nonterminals().collect();
    // Valid terminal distances per nonterminal, in terminal order.
    let mut reach: Vec<Vec<(usize, f64)>> = Vec::with_capacity(nonterminals.len());
    for &v in &nonterminals {
        deadline.check()?;
        reach.push(
            r.iter()
                .enumerate()
                .filter_map(|(i, &t)| oracle.valid_distance(t, v).map(|d| (i, d)))
                .collect(),
        );
    }

    loop {
        deadline.check()?;
        // (win, cost, terminal tuple, v index)
        let mut best: Option<(f64, f64, [usize; 3], usize)> = None;
        for (vi, row) in reach.iter().enumerate() {
            if row.len() < 3 {
                continue;
            }
            let &(s0, d0) = row
                .iter()
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .unwrap();
            let mut pick1: Option<(usize, f64, f64)> = None;
            for &(t, d) in row {
                if t == s0 {
                    continue;
                }
                let score = runner.state.bottleneck(s0, t) - d;
                if pick1.is_none_or(|(_, _, s)| score > s) {
                    pick1 = Some((t, d, score));
                }
            }
            let (s1, d1, _) = pick1.unwrap();
            let mut pick2: Option<(usize, f64, f64, f64)> = None;
            for &(t, d) in row {
                if t == s0 || t == s1 {
                    continue;
                }
                runner.evaluations += 1;
                let save = runner.state.save(&[s0, s1, t]);
                let cost = d0 + d1 + d;
                let win = save - cost;
                if pick2.is_none_or(|(_, _, _, w)| win > w) {
                    pick2 = Some((t, d, cost, win));
                }
            }
            let (s2, _, cost, win) = pick2.unwrap();
            if !is_promising(win + cost, cost) {
                continue;
            }
            let mut ts = [s0, s1, s2];
            ts.sort_unstable();
            let better = match &best {
                None => true,
                Some((bw, bc, bt, _)) => match win.total_cmp(bw) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => match cost.total_cmp(bc) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => ts < *bt,
                    },
                },
            };
            if better {
                best = Some((win, cost, ts, vi));
            }
        }
        let Some((win, cost, ts, vi)) = best else { break };
        let v = nonterminals[vi];
        let edges = ts
            .iter()
            .map(|&i| {
                let t = r[i];
                Ok(MetricEdge {
                    a: v,
                    b: t,
                    cost: oracle.distance(t, v)?,
                    path: oracle.path_edges(t, v)?,
                })
            })
            .collect::<Result<Vec<_>, OracleError>>()?;
        let terminals: Vec<usize> = ts.iter().map(|&i| r[i]).collect();
        let comp = FullComponent::new(&terminals, edges).expect("a star on three terminals is a full component");
        runner.contract(&comp, &ts, win, win + cost);
    }
    Ok(runner.finish(initial_mst, deadline)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::generate;
    use crate::components::GenStrategy;
    use crate::graph::{DistMode, PathPolicy};

    /// Three terminals around a hub; the star costs 3, the metric MST 3.8.
    fn star() -> Instance {
        Instance::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.9), (2, 3, 1.9)], [1, 2, 3]).unwrap()
    }

    fn components(inst: &Instance, k: usize) -> ComponentSet {
        let oracle = DistanceOracle::build(inst, DistMode::Apsp, PathPolicy::Prefer);
        generate(inst, &oracle, GenStrategy::Dw, k, &Deadline::none()).unwrap()
    }

    #[test]
    fn star_is_contracted() {
        let inst = star();
        let set = components(&inst, 3);
        for win in [WinKind::Abs, WinKind::Rel, WinKind::Loss] {
            let opts = GcfOptions { win, ..Default::default() };
            let res = run_gcf(&inst, &set, &opts, &Deadline::none()).unwrap();
            assert!((res.initial_mst - 3.8).abs() < 1e-12);
            assert_eq!(res.tree.cost, 3.0);
            assert_eq!(res.steps.len(), 1);
        }
        let res = run_gcf(&inst, &set, &GcfOptions::lca(), &Deadline::none()).unwrap();
        assert_eq!(res.tree.cost, 3.0);
    }

    #[test]
    fn ondemand_finds_star() {
        let inst = star();
        let oracle = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        let opts = GcfOptions {
            win: WinKind::Abs,
            ..Default::default()
        };
        let res = run_gcf_ondemand(&inst, &oracle, &opts, &Deadline::none()).unwrap();
        assert_eq!(res.tree.cost, 3.0);
        assert!(matches!(
            run_gcf_ondemand(&inst, &oracle, &GcfOptions::default(), &Deadline::none()),
            Err(GcfError::OnDemandWin)
        ));
    }

    #[test]
    fn win_values() {
        assert_eq!(win_value(WinKind::Abs, 5.0, 3.0, 1.0), 2.0);
        assert_eq!(win_value(WinKind::Rel, 6.0, 3.0, 1.0), 2.0);
        assert_eq!(win_value(WinKind::Loss, 5.0, 3.0, 0.5), 4.0);
        assert_eq!(win_value(WinKind::Loss, 5.0, 3.0, 0.0), f64::INFINITY);
        assert_eq!(win_value(WinKind::Rel, 1.0, 0.0, 0.0), f64::INFINITY);
    }
}
