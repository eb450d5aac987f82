//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use steiner_core::components::{generate, ComponentSet, GenStrategy};
use steiner_core::generator::{random_instance, CostKind, GeneratorConfig};
use steiner_core::graph::{DistMode, DistanceOracle, Instance, PathPolicy};
use steiner_core::budget::Deadline;

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Kruskal over `(u, v, c)` on `n` nodes; `None` if `required` is not
/// spanned by one tree.
pub fn kruskal(n: usize, edges: &[(usize, usize, f64)], required: &[usize]) -> Option<f64> {
    let mut order: Vec<&(usize, usize, f64)> = edges.iter().collect();
    order.sort_by(|a, b| a.2.total_cmp(&b.2));
    let mut p: Vec<usize> = (0..n).collect();
    let mut cost = 0.0;
    for &&(u, v, c) in &order {
        let (a, b) = (find(&mut p, u), find(&mut p, v));
        if a != b {
            p[a] = b;
            cost += c;
        }
    }
    let root = find(&mut p, required[0]);
    required.iter().all(|&r| find(&mut p, r) == root).then_some(cost)
}

/// Optimal Steiner cost by enumerating every set of Steiner nodes and
/// taking the MST of the induced subgraph.
pub fn brute_force_steiner(inst: &Instance) -> f64 {
    let non: Vec<usize> = inst.nonterminals().collect();
    assert!(non.len() <= 16, "too many nonterminals for enumeration");
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << non.len()) {
        let mut on = vec![false; inst.node_count()];
        for &t in inst.terminals() {
            on[t] = true;
        }
        for (i, &v) in non.iter().enumerate() {
            if mask >> i & 1 == 1 {
                on[v] = true;
            }
        }
        let edges: Vec<(usize, usize, f64)> = inst
            .edges()
            .iter()
            .filter(|e| on[e.u] && on[e.v])
            .map(|e| (e.u, e.v, e.cost))
            .collect();
        let nodes: Vec<usize> = (0..inst.node_count()).filter(|&v| on[v]).collect();
        if let Some(c) = kruskal(inst.node_count(), &edges, &nodes) {
            best = best.min(c);
        }
    }
    best
}

/// All-pairs shortest paths by Floyd–Warshall.
pub fn floyd(inst: &Instance) -> Vec<Vec<f64>> {
    let n = inst.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for e in inst.edges() {
        d[e.u][e.v] = d[e.u][e.v].min(e.cost);
        d[e.v][e.u] = d[e.v][e.u].min(e.cost);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// `mst(M) - mst(M with the members of C joined by zero-cost edges)`.
pub fn definitional_save(n: usize, tree: &[(usize, usize, f64)], members: &[usize]) -> f64 {
    let all: Vec<usize> = (0..n).collect();
    let before = kruskal(n, tree, &all).expect("tree spans");
    let mut joined = tree.to_vec();
    for w in members.windows(2) {
        joined.push((w[0], w[1], 0.0));
    }
    before - kruskal(n, &joined, &all).expect("tree spans")
}

/// Largest violation of `sum (|S ∩ C| - 1)^+ x_C <= |S| - 1` over all
/// terminal subsets `S` with at least two members.
pub fn max_subtour_violation(terminals: &[usize], comps: &[(Vec<usize>, f64)]) -> (f64, Vec<usize>) {
    let m = terminals.len();
    assert!(m <= 16);
    let mut worst = (f64::NEG_INFINITY, Vec::new());
    for mask in 1u32..(1 << m) {
        if mask.count_ones() < 2 {
            continue;
        }
        let s: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| terminals[i]).collect();
        let lhs: f64 = comps
            .iter()
            .map(|(ts, x)| {
                let inter = ts.iter().filter(|t| s.contains(t)).count();
                x * inter.saturating_sub(1) as f64
            })
            .sum();
        let v = lhs - (s.len() as f64 - 1.0);
        if v > worst.0 {
            worst = (v, s);
        }
    }
    worst
}

pub fn small_instance(seed: u64, max_nodes: usize) -> Instance {
    let n = 4 + (seed as usize * 7 + 3) % (max_nodes - 3);
    let t = 2 + (seed as usize * 5 + 1) % (n - 1);
    let extra = (seed as usize * 3) % (2 * n);
    let cfg = GeneratorConfig::new(n, t, extra);
    let cfg = if seed.is_multiple_of(3) {
        cfg.with_costs(CostKind::Real { low: 0.5, high: 5.0 })
    } else {
        cfg
    };
    random_instance(&cfg, seed)
}

pub fn components(inst: &Instance, strategy: GenStrategy, k: usize) -> ComponentSet {
    let oracle = DistanceOracle::build(inst, DistMode::Apsp, PathPolicy::Prefer);
    generate(inst, &oracle, strategy, k, &Deadline::none()).unwrap()
}

/// Four terminals on unit spokes around a zero-cost 4-cycle.
pub fn cycle4() -> Instance {
    let mut edges: Vec<(usize, usize, f64)> = (0..4).map(|i| (i, 4 + i, 1.0)).collect();
    edges.extend((0..4).map(|i| (4 + i, 4 + (i + 1) % 4, 0.0)));
    Instance::new(8, edges, 0..4).unwrap().with_name("cycle4")
}
