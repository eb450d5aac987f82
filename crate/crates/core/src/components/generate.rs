use std::collections::HashMap;

use super::{ComponentError, ComponentSet, FullComponent, MetricEdge};
use crate::budget::Deadline;
use crate::exact;
use crate::graph::mst::dense_prim;
use crate::graph::{DistMode, DistanceOracle, Instance, VoronoiPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenStrategy {
    /// Smallest metric MST over every small nonterminal subset.
    Naive,
    /// Precomputed inner trees with cheapest terminal attachment.
    Smart,
    /// Restricted Dreyfus–Wagner.
    Dw,
    /// Naive, with inner nodes restricted to the Voronoi regions of the terminals.
    Voronoi,
}

impl GenStrategy {
    pub fn name(self) -> &'static str {
        match self {
            GenStrategy::Naive => "all:naive",
            GenStrategy::Smart => "all:smart",
            GenStrategy::Dw => "all:dw",
            GenStrategy::Voronoi => "voronoi",
        }
    }
}

/// Calls `f` on every `r`-subset of `items` in lexicographic order.
/// Stops early when `f` returns an error.
pub(crate) fn for_each_subset<E>(
    items: &[usize],
    r: usize,
    mut f: impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    let n = items.len();
    if r > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf)?;
        let mut i = r;
        while i > 0 && idx[i - 1] == i - 1 + n - r {
            i -= 1;
        }
        if i == 0 {
            return Ok(());
        }
        let i = i - 1;
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..r {
            buf[j] = items[idx[j]];
        }
    }
}

fn check_k(k: usize, oracle: Option<&DistanceOracle>) -> Result<(), ComponentError> {
    if k < 2 {
        return Err(ComponentError::InvalidK { k, min: 2 });
    }
    if let Some(o) = oracle {
        if k >= 4 && o.mode() != DistMode::Apsp {
            return Err(ComponentError::NeedsApsp);
        }
    }
    Ok(())
}

fn metric_edge(oracle: &DistanceOracle, a: usize, b: usize) -> Result<MetricEdge, ComponentError> {
    Ok(MetricEdge {
        a,
        b,
        cost: oracle.distance(a, b)?,
        path: oracle.path_edges(a, b)?,
    })
}

fn two_component(oracle: &DistanceOracle, a: usize, b: usize) -> Result<Option<FullComponent>, ComponentError> {
    if !oracle.is_valid(a, b) {
        return Ok(None);
    }
    Ok(Some(FullComponent::new(&[a, b], vec![metric_edge(oracle, a, b)?])?))
}

/// MST of the metric closure over `nodes` using every pair with finite
/// distance. Returns local `(a, b)` tree pairs and the cost.
fn closure_mst(oracle: &DistanceOracle, nodes: &[usize]) -> Option<(Vec<(usize, usize)>, f64)> {
    dense_prim(nodes.len(), |i, j| {
        oracle
            .distance(nodes[i], nodes[j])
            .ok()
            .filter(|d| d.is_finite())
    })
    .ok()
}

/// Core of the naive and Voronoi strategies: the smallest metric MST over
/// `R' ∪ S` for every allowed `S` with `|S| <= |R'| - 2`, kept only when it
/// is a full component whose expanded paths avoid terminals.
fn naive_best(
    oracle: &DistanceOracle,
    terminals: &[usize],
    allowed: &[usize],
    set: &mut ComponentSet,
) -> Result<(), ComponentError> {
    let r = terminals.len();
    let mut best: Option<(f64, Vec<usize>, Vec<(usize, usize)>)> = None;
    let mut nodes: Vec<usize> = Vec::with_capacity(2 * r);
    for s in 0..=r.saturating_sub(2).min(allowed.len()) {
        for_each_subset(allowed, s, |sub| -> Result<(), ComponentError> {
            nodes.clear();
            nodes.extend_from_slice(terminals);
            nodes.extend_from_slice(sub);
            if let Some((pairs, cost)) = closure_mst(oracle, &nodes) {
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    best = Some((cost, nodes.clone(), pairs));
                }
            }
            Ok(())
        })?;
    }
    let Some((_, nodes, pairs)) = best else {
        return Ok(());
    };
    let all_valid = pairs.iter().all(|&(i, j)| oracle.is_valid(nodes[i], nodes[j]));
    let edges: Result<Vec<MetricEdge>, ComponentError> = pairs
        .iter()
        .map(|&(i, j)| metric_edge(oracle, nodes[i], nodes[j]))
        .collect();
    match FullComponent::new(terminals, edges?) {
        Ok(c) if all_valid => set.insert(c),
        _ => set.dropped_inner_terminal += 1,
    }
    Ok(())
}

fn generate_naive_like(
    inst: &Instance,
    oracle: &DistanceOracle,
    k: usize,
    allowed_for: impl Fn(&[usize]) -> Vec<usize>,
    deadline: &Deadline,
) -> Result<ComponentSet, ComponentError> {
    check_k(k, Some(oracle))?;
    let mut set = ComponentSet::new(k);
    let terminals = inst.terminals();
    for size in 2..=k.min(terminals.len()) {
        for_each_subset(terminals, size, |sub| -> Result<(), ComponentError> {
            deadline.check()?;
            if size == 2 {
                if let Some(c) = two_component(oracle, sub[0], sub[1])? {
                    set.insert(c);
                }
                return Ok(());
            }
            naive_best(oracle, sub, &allowed_for(sub), &mut set)
        })?;
    }
    Ok(set)
}

/// Enumerates every terminal subset of size `2..=k` against every
/// nonterminal subset of size at most `|R'| - 2`.
pub fn gen_all_naive(
    inst: &Instance,
    oracle: &DistanceOracle,
    k: usize,
    deadline: &Deadline,
) -> Result<ComponentSet, ComponentError> {
    let nonterminals: Vec<usize> = inst.nonterminals().collect();
    generate_naive_like(inst, oracle, k, |_| nonterminals.clone(), deadline)
}

/// As [`gen_all_naive`], with inner candidates restricted to `Vor(R')`.
pub fn gen_voronoi(
    inst: &Instance,
    oracle: &DistanceOracle,
    voronoi: &VoronoiPartition,
    k: usize,
    deadline: &Deadline,
) -> Result<ComponentSet, ComponentError> {
    generate_naive_like(inst, oracle, k, |sub| voronoi.nonterminals_of(inst, sub), deadline)
}

struct InnerTree {
    nodes: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    cost: f64,
}

/// Removes inner leaves (degree-1 non-terminals) until none remain.
fn strip_inner_leaves(terminals: &[usize], mut edges: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &(a, b) in &edges {
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        let before = edges.len();
        edges.retain(|&(a, b)| {
            let leaf = |v: usize| degree[&v] == 1 && !terminals.contains(&v);
            !(leaf(a) || leaf(b))
        });
        if edges.len() == before {
            return edges;
        }
    }
}

/// Inner trees `MST(Ḡ_S)` over valid nonterminal pairs, then each terminal
/// attached to its cheapest inner node by a valid pair.
pub fn gen_all_smart(
    inst: &Instance,
    oracle: &DistanceOracle,
    k: usize,
    deadline: &Deadline,
) -> Result<ComponentSet, ComponentError> {
    check_k(k, Some(oracle))?;
    let mut set = ComponentSet::new(k);
    let terminals = inst.terminals();
    let nonterminals: Vec<usize> = inst.nonterminals().collect();
    let mut inner_trees: Vec<InnerTree> = Vec::new();

    for size in 2..=k.min(terminals.len()) {
        if size >= 3 {
            for_each_subset(&nonterminals, size - 2, |sub| -> Result<(), ComponentError> {
                deadline.check()?;
                let tree = dense_prim(sub.len(), |i, j| oracle.valid_distance(sub[i], sub[j]));
                if let Ok((pairs, cost)) = tree {
                    inner_trees.push(InnerTree {
                        nodes: sub.to_vec(),
                        pairs: pairs.iter().map(|&(i, j)| (sub[i], sub[j])).collect(),
                        cost,
                    });
                }
                Ok(())
            })?;
        }
        for_each_subset(terminals, size, |sub| -> Result<(), ComponentError> {
            deadline.check()?;
            if size == 2 {
                if let Some(c) = two_component(oracle, sub[0], sub[1])? {
                    set.insert(c);
                }
                return Ok(());
            }
            let mut best: Option<(f64, usize, Vec<usize>)> = None;
            'trees: for (ti, tree) in inner_trees.iter().enumerate() {
                let mut cost = tree.cost;
                let mut attach = Vec::with_capacity(size);
                for &t in sub {
                    let mut pick: Option<(f64, usize)> = None;
                    for &x in &tree.nodes {
                        if let Some(d) = oracle.valid_distance(t, x) {
                            if pick.is_none_or(|p| d < p.0) {
                                pick = Some((d, x));
                            }
                        }
                    }
                    let Some((d, x)) = pick else { continue 'trees };
                    cost += d;
                    attach.push(x);
                }
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    best = Some((cost, ti, attach));
                }
            }
            let Some((_, ti, attach)) = best else {
                return Ok(());
            };
            let tree = &inner_trees[ti];
            let mut pairs = tree.pairs.clone();
            pairs.extend(sub.iter().zip(&attach).map(|(&t, &x)| (t, x)));
            let pairs = strip_inner_leaves(sub, pairs);
            let edges: Result<Vec<MetricEdge>, ComponentError> =
                pairs.iter().map(|&(a, b)| metric_edge(oracle, a, b)).collect();
            match FullComponent::new(sub, edges?) {
                Ok(c) => set.insert(c),
                Err(_) => set.dropped_inner_terminal += 1,
            }
            Ok(())
        })?;
    }
    Ok(set)
}

/// Converts an instance tree spanning `terminals` into a component by
/// contracting chains of degree-2 nonterminals. `None` if the tree has an
/// inner terminal.
pub(crate) fn component_from_tree(
    inst: &Instance,
    terminals: &[usize],
    tree: &[usize],
) -> Option<FullComponent> {
    let mut adj: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for &e in tree {
        let edge = inst.edge(e);
        adj.entry(edge.u).or_default().push((edge.v, e));
        adj.entry(edge.v).or_default().push((edge.u, e));
    }
    for (&v, nb) in &adj {
        let listed = terminals.contains(&v);
        if inst.is_terminal(v) && !listed {
            return None;
        }
        if listed && nb.len() != 1 {
            return None;
        }
    }
    let is_key = |v: usize| terminals.contains(&v) || adj[&v].len() >= 3;
    let mut keys: Vec<usize> = adj.keys().copied().filter(|&v| is_key(v)).collect();
    keys.sort_unstable();
    let mut edges = Vec::new();
    let mut used: HashMap<usize, bool> = HashMap::new();
    for &start in &keys {
        for &(first, e0) in &adj[&start] {
            if used.contains_key(&e0) {
                continue;
            }
            let mut path = vec![e0];
            used.insert(e0, true);
            let (mut prev, mut cur) = (start, first);
            while !is_key(cur) {
                let &(next, e) = adj[&cur].iter().find(|&&(w, _)| w != prev).unwrap();
                used.insert(e, true);
                path.push(e);
                prev = cur;
                cur = next;
            }
            edges.push(MetricEdge {
                a: start,
                b: cur,
                cost: inst.total_cost(&path),
                path,
            });
        }
    }
    FullComponent::new(terminals, edges).ok()
}

/// Optimal tree per terminal subset of size `<= k` from one restricted
/// Dreyfus–Wagner run; trees with inner terminals are dropped.
pub fn gen_all_dw(inst: &Instance, k: usize, deadline: &Deadline) -> Result<ComponentSet, ComponentError> {
    check_k(k, None)?;
    let trees = exact::restricted_trees(inst, k, &exact::ExactOptions::default(), deadline).map_err(|e| match e {
        exact::ExactError::Interrupted(i) => ComponentError::Interrupted(i),
        _ => ComponentError::TableLimit,
    })?;
    let mut set = ComponentSet::new(k);
    for (terminals, tree) in trees {
        if terminals.len() < 2 {
            continue;
        }
        match component_from_tree(inst, &terminals, &tree) {
            Some(c) => set.insert(c),
            None => set.dropped_inner_terminal += 1,
        }
    }
    Ok(set)
}

/// Dispatches to the requested strategy. The Voronoi partition is computed
/// on demand.
pub fn generate(
    inst: &Instance,
    oracle: &DistanceOracle,
    strategy: GenStrategy,
    k: usize,
    deadline: &Deadline,
) -> Result<ComponentSet, ComponentError> {
    let mut set = match strategy {
        GenStrategy::Naive => gen_all_naive(inst, oracle, k, deadline)?,
        GenStrategy::Smart => gen_all_smart(inst, oracle, k, deadline)?,
        GenStrategy::Dw => gen_all_dw(inst, k, deadline)?,
        GenStrategy::Voronoi => gen_voronoi(inst, oracle, &VoronoiPartition::compute(inst), k, deadline)?,
    };
    set.sort();
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PathPolicy;

    #[test]
    fn subsets_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_subset::<()>(&[1, 2, 3, 4], 2, |s| {
            seen.push(s.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        let mut count = 0;
        for_each_subset::<()>(&[1, 2], 0, |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
        for_each_subset::<()>(&[1, 2], 3, |_| panic!()).unwrap();
    }

    fn star() -> Instance {
        Instance::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], [1, 2, 3]).unwrap()
    }

    #[test]
    fn star_components() {
        let inst = star();
        let o = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Prefer);
        let d = Deadline::none();
        let naive = generate(&inst, &o, GenStrategy::Naive, 3, &d).unwrap();
        let expected = vec![
            (vec![1, 2], 2.0),
            (vec![1, 2, 3], 3.0),
            (vec![1, 3], 2.0),
            (vec![2, 3], 2.0),
        ];
        assert_eq!(naive.cost_map(), expected);
        for s in [GenStrategy::Smart, GenStrategy::Dw, GenStrategy::Voronoi] {
            assert_eq!(generate(&inst, &o, s, 3, &d).unwrap().cost_map(), expected, "{s:?}");
        }
        let c = naive.get(&[1, 2, 3]).unwrap();
        assert_eq!(c.inner, vec![0]);
        assert_eq!(c.expand(), vec![0, 1, 2]);
        assert_eq!(c.loss_cost, 1.0);
    }

    #[test]
    fn no_nonterminals_gives_pairs_only() {
        let inst = Instance::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.5)], [0, 1, 2]).unwrap();
        let o = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Prefer);
        let s = gen_all_smart(&inst, &o, 3, &Deadline::none()).unwrap();
        assert!(s.components().iter().all(|c| c.size() == 2));
    }

    #[test]
    fn k4_needs_apsp() {
        let inst = star();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        assert_eq!(
            gen_all_naive(&inst, &o, 4, &Deadline::none()).unwrap_err(),
            ComponentError::NeedsApsp
        );
    }
}
