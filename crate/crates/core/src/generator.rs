//! Seeded random connected instances for tests, examples and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Instance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostKind {
    /// Uniform integers in `1..=max`.
    Integer { max: u32 },
    /// Uniform reals in `[low, high)`.
    Real { low: f64, high: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub nodes: usize,
    pub terminals: usize,
    /// Edges added on top of a random spanning tree.
    pub extra_edges: usize,
    pub costs: CostKind,
}

impl GeneratorConfig {
    pub fn new(nodes: usize, terminals: usize, extra_edges: usize) -> Self {
        GeneratorConfig {
            nodes,
            terminals,
            extra_edges,
            costs: CostKind::Integer { max: 10 },
        }
    }

    pub fn with_costs(mut self, costs: CostKind) -> Self {
        self.costs = costs;
        self
    }
}

fn draw_cost(rng: &mut ChaCha8Rng, kind: CostKind) -> f64 {
    match kind {
        CostKind::Integer { max } => rng.gen_range(1..=max.max(1)) as f64,
        CostKind::Real { low, high } => rng.gen_range(low..high),
    }
}

/// A connected instance: a random spanning tree plus `extra_edges` random
/// extra edges (duplicates collapse), with `terminals` random terminals.
pub fn random_instance(cfg: &GeneratorConfig, seed: u64) -> Instance {
    assert!(cfg.nodes >= 2, "need at least two nodes");
    let terminals = cfg.terminals.clamp(2, cfg.nodes);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..cfg.nodes).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(cfg.nodes - 1 + cfg.extra_edges);
    for i in 1..cfg.nodes {
        let j = rng.gen_range(0..i);
        edges.push((order[i], order[j], draw_cost(&mut rng, cfg.costs)));
    }
    let max_extra = cfg.nodes * (cfg.nodes - 1) / 2 - (cfg.nodes - 1);
    let mut added = 0;
    let mut attempts = 0;
    while added < cfg.extra_edges.min(max_extra) && attempts < 50 * (cfg.extra_edges + 1) {
        attempts += 1;
        let (u, v) = (rng.gen_range(0..cfg.nodes), rng.gen_range(0..cfg.nodes));
        if u == v {
            continue;
        }
        edges.push((u, v, draw_cost(&mut rng, cfg.costs)));
        added += 1;
    }
    let mut nodes: Vec<usize> = (0..cfg.nodes).collect();
    nodes.shuffle(&mut rng);
    nodes.truncate(terminals);
    Instance::new(cfg.nodes, edges, nodes)
        .expect("generated graphs are connected with valid costs")
        .with_name(format!("rand-{}-{}-{}-{seed}", cfg.nodes, terminals, cfg.extra_edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_connected() {
        let cfg = GeneratorConfig::new(12, 5, 8);
        let a = random_instance(&cfg, 3);
        let b = random_instance(&cfg, 3);
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.terminals().len(), 5);
        assert!(a.has_integral_costs());
    }
}
