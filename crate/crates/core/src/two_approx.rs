//! Classic 2-approximations: Takahashi–Matsuyama (TM), Kou–Markowsky–Berman
//! (KMB) and Mehlhorn's Voronoi variant, plus the shared cleanup step.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use thiserror::Error;

use crate::budget::{Deadline, Interrupted};
use crate::graph::mst::{minimum_spanning_forest, sorted_edge_order};
use crate::graph::paths::ordered::OrdF64;
use crate::graph::{DistanceOracle, Instance, UnionFind, VoronoiPartition, WeightedGraph};
use crate::numeric::approx_eq;

/// A tree in the instance graph spanning all terminals.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerTree {
    /// Instance edge ids, sorted.
    pub edges: Vec<usize>,
    pub cost: f64,
    /// Spanned nodes, sorted.
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("edge set does not connect terminal {0} to the other terminals")]
    DisconnectsTerminals(usize),
    #[error(transparent)]
    Interrupted(#[from] Interrupted),
}

impl SteinerTree {
    fn from_edges(inst: &Instance, mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut nodes: BTreeSet<usize> = BTreeSet::new();
        for &e in &edges {
            nodes.insert(inst.edge(e).u);
            nodes.insert(inst.edge(e).v);
        }
        let cost = inst.total_cost(&edges);
        SteinerTree {
            edges,
            cost,
            nodes: nodes.into_iter().collect(),
        }
    }

    /// Single-node tree (all terminals coincide; only arises after contraction).
    fn single(node: usize) -> Self {
        SteinerTree {
            edges: Vec::new(),
            cost: 0.0,
            nodes: vec![node],
        }
    }

    /// Checks the Steiner tree invariants against `terminals`: acyclic,
    /// connected, spans every terminal, all leaves terminals, cost matches.
    pub fn validate(&self, inst: &Instance, terminals: &[usize]) -> Result<(), String> {
        let mut uf = UnionFind::new(inst.node_count());
        let mut degree = vec![0usize; inst.node_count()];
        for &e in &self.edges {
            let edge = inst.edge(e);
            if !uf.union(edge.u, edge.v) {
                return Err(format!("edge {e} closes a cycle"));
            }
            degree[edge.u] += 1;
            degree[edge.v] += 1;
        }
        let Some(&root) = terminals.first() else {
            return Ok(());
        };
        for &t in terminals {
            if !uf.same(root, t) {
                return Err(format!("terminal {t} not connected"));
            }
        }
        let is_required = |v: usize| terminals.contains(&v);
        for &v in &self.nodes {
            if !uf.same(root, v) {
                return Err(format!("node {v} in a separate piece"));
            }
            if degree[v] == 1 && !is_required(v) {
                return Err(format!("nonterminal leaf {v}"));
            }
        }
        if !approx_eq(self.cost, inst.total_cost(&self.edges)) {
            return Err(format!("cost {} does not match edge sum", self.cost));
        }
        Ok(())
    }
}

/// MST of the subgraph formed by `edges`, then repeated removal of leaves
/// not in `terminals`.
pub fn prune_to_steiner_tree(
    inst: &Instance,
    edges: &[usize],
    terminals: &[usize],
) -> Result<SteinerTree, TreeError> {
    let Some(&root) = terminals.first() else {
        return Ok(SteinerTree::single(0));
    };
    let mut sub = WeightedGraph::new(inst.node_count());
    let mut ids: Vec<usize> = edges.to_vec();
    ids.sort_unstable();
    ids.dedup();
    for &e in &ids {
        let edge = inst.edge(e);
        sub.add_edge(edge.u, edge.v, edge.cost);
    }
    let (forest, _) = minimum_spanning_forest(&sub);
    let mut uf = UnionFind::new(inst.node_count());
    for &local in &forest.edges {
        let (u, v, _) = sub.edges[local];
        uf.union(u, v);
    }
    for &t in terminals {
        if !uf.same(root, t) {
            return Err(TreeError::DisconnectsTerminals(t));
        }
    }
    let kept: Vec<usize> = forest
        .edges
        .iter()
        .map(|&local| ids[local])
        .filter(|&e| uf.same(root, inst.edge(e).u))
        .collect();
    if kept.is_empty() {
        return Ok(SteinerTree::single(root));
    }
    Ok(prune_leaves(inst, kept, terminals))
}

/// Removes nonterminal leaves from a tree until none remain.
fn prune_leaves(inst: &Instance, tree: Vec<usize>, terminals: &[usize]) -> SteinerTree {
    let n = inst.node_count();
    let mut required = vec![false; n];
    for &t in terminals {
        required[t] = true;
    }
    let mut degree = vec![0usize; n];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in &tree {
        let edge = inst.edge(e);
        degree[edge.u] += 1;
        degree[edge.v] += 1;
        incident[edge.u].push(e);
        incident[edge.v].push(e);
    }
    let mut removed = vec![false; inst.edge_count()];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] == 1 && !required[v]).collect();
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let &e = incident[v].iter().find(|&&e| !removed[e]).unwrap();
        removed[e] = true;
        degree[v] = 0;
        let w = inst.edge(e).other(v);
        degree[w] -= 1;
        if degree[w] == 1 && !required[w] {
            stack.push(w);
        }
    }
    SteinerTree::from_edges(inst, tree.into_iter().filter(|&e| !removed[e]).collect())
}

/// TM on the instance's terminals, starting from the lowest terminal.
pub fn tm(inst: &Instance) -> SteinerTree {
    tm_with(inst, inst.terminals(), &Deadline::none()).expect("no deadline set")
}

/// TM connecting `terminals` (any node set), starting from the lowest one.
pub fn tm_with(
    inst: &Instance,
    terminals: &[usize],
    deadline: &Deadline,
) -> Result<SteinerTree, Interrupted> {
    match terminals.iter().min() {
        Some(&start) => tm_from(inst, start, terminals, deadline),
        None => Ok(SteinerTree::single(0)),
    }
}

/// TM from every terminal as start, keeping the cheapest result.
pub fn tm_best_start(inst: &Instance, deadline: &Deadline) -> Result<SteinerTree, Interrupted> {
    let mut best: Option<SteinerTree> = None;
    for &start in inst.terminals() {
        let t = tm_from(inst, start, inst.terminals(), deadline)?;
        if best.as_ref().is_none_or(|b| t.cost < b.cost) {
            best = Some(t);
        }
    }
    Ok(best.expect("at least two terminals"))
}

/// Each round runs a multi-source search from the current tree and joins
/// the nearest unreached terminal (lowest index on ties) by its shortest path.
fn tm_from(
    inst: &Instance,
    start: usize,
    terminals: &[usize],
    deadline: &Deadline,
) -> Result<SteinerTree, Interrupted> {
    let n = inst.node_count();
    let mut required = vec![false; n];
    for &t in terminals {
        required[t] = true;
    }
    let mut in_tree = vec![false; n];
    in_tree[start] = true;
    let mut tree_nodes = vec![start];
    let mut tree_edges: Vec<usize> = Vec::new();
    let mut remaining = (0..n).filter(|&v| required[v] && v != start).count();

    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![(usize::MAX, usize::MAX); n];
    let mut done = vec![false; n];
    while remaining > 0 {
        deadline.check()?;
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        done.iter_mut().for_each(|d| *d = false);
        let mut heap = BinaryHeap::new();
        for &v in &tree_nodes {
            dist[v] = 0.0;
            heap.push(Reverse((OrdF64(0.0), v)));
        }
        let mut target = usize::MAX;
        while let Some(Reverse((OrdF64(d), x))) = heap.pop() {
            if done[x] {
                continue;
            }
            done[x] = true;
            if required[x] && !in_tree[x] {
                target = x;
                break;
            }
            for &(w, e) in inst.neighbors(x) {
                let cand = d + inst.edge(e).cost;
                if !done[w] && cand < dist[w] {
                    dist[w] = cand;
                    pred[w] = (x, e);
                    heap.push(Reverse((OrdF64(cand), w)));
                }
            }
        }
        debug_assert!(target != usize::MAX, "instance is connected");
        let mut x = target;
        while !in_tree[x] {
            in_tree[x] = true;
            tree_nodes.push(x);
            if required[x] {
                remaining -= 1;
            }
            let (p, e) = pred[x];
            tree_edges.push(e);
            x = p;
        }
    }
    if tree_edges.is_empty() {
        return Ok(SteinerTree::single(start));
    }
    Ok(prune_leaves(inst, tree_edges, terminals))
}

/// KMB: MST of the terminal distance graph, expanded to paths, cleaned up.
pub fn kmb(inst: &Instance, oracle: &DistanceOracle) -> SteinerTree {
    let r = inst.terminals();
    let closure = crate::graph::metric_closure(oracle, r, false).expect("terminal rows are always present");
    let (tree, _) = minimum_spanning_forest(&closure.graph);
    let mut edges = Vec::new();
    for &local in &tree.edges {
        let (u, v) = closure.original_pair(local);
        edges.extend(oracle.path_edges(u, v).expect("terminal pair"));
    }
    prune_to_steiner_tree(inst, &edges, r).expect("expanded terminal MST connects all terminals")
}

/// Mehlhorn: the terminal graph is built from Voronoi boundary edges.
pub fn mehlhorn(inst: &Instance) -> SteinerTree {
    let vor = VoronoiPartition::compute(inst);
    // One candidate per boundary edge; Kruskal picks the cheapest per pair.
    let mut candidates = WeightedGraph::new(inst.node_count());
    let mut via: Vec<usize> = Vec::new();
    for (id, e) in inst.edges().iter().enumerate() {
        let (a, b) = (vor.owner(e.u), vor.owner(e.v));
        if a == b {
            continue;
        }
        let cost = vor.owner_distance(e.u) + e.cost + vor.owner_distance(e.v);
        candidates.add_edge(a, b, cost);
        via.push(id);
    }
    let mut uf = UnionFind::new(inst.node_count());
    let mut edges = Vec::new();
    for local in sorted_edge_order(&candidates.edges) {
        let (a, b, _) = candidates.edges[local];
        if !uf.union(a, b) {
            continue;
        }
        let e = inst.edge(via[local]);
        edges.push(via[local]);
        edges.extend(vor.path_from_owner(e.u).unwrap());
        edges.extend(vor.path_from_owner(e.v).unwrap());
    }
    prune_to_steiner_tree(inst, &edges, inst.terminals()).expect("boundary MST connects all terminals")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DistMode, PathPolicy};

    fn star() -> Instance {
        Instance::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], [1, 2, 3]).unwrap()
    }

    #[test]
    fn star_gives_optimum() {
        let inst = star();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        for t in [tm(&inst), kmb(&inst, &o), mehlhorn(&inst)] {
            assert_eq!(t.cost, 3.0);
            t.validate(&inst, inst.terminals()).unwrap();
        }
    }

    #[test]
    fn two_terminals_take_shortest_path() {
        let inst = Instance::new(4, [(0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.5), (2, 3, 1.0)], [0, 3]).unwrap();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        for t in [tm(&inst), kmb(&inst, &o), mehlhorn(&inst)] {
            assert_eq!(t.cost, 2.0);
            assert_eq!(t.edges, vec![0, 1]);
        }
    }

    #[test]
    fn prune_drops_dangling_chain_and_cycle_edge() {
        // Path 0-1-2 with dangling chain 2-3-4; terminals 0, 2.
        let inst = Instance::new(5, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)], [0, 2]).unwrap();
        let t = prune_to_steiner_tree(&inst, &[0, 1, 2, 3], inst.terminals()).unwrap();
        assert_eq!(t.edges, vec![0, 1]);

        let tri = Instance::new(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)], [0, 1, 2]).unwrap();
        let t = prune_to_steiner_tree(&tri, &[0, 1, 2], tri.terminals()).unwrap();
        assert_eq!(t.edges, vec![0, 1]);
        assert_eq!(t.cost, 3.0);
    }

    #[test]
    fn prune_reports_disconnection() {
        let inst = Instance::new(3, [(0, 1, 1.0), (1, 2, 1.0)], [0, 2]).unwrap();
        assert_eq!(
            prune_to_steiner_tree(&inst, &[0], inst.terminals()),
            Err(TreeError::DisconnectsTerminals(2))
        );
    }

    #[test]
    fn best_start_never_worse() {
        let inst = star();
        let a = tm(&inst);
        let b = tm_best_start(&inst, &Deadline::none()).unwrap();
        assert!(b.cost <= a.cost);
    }
}
