//! k-restricted full components: generation, loss forests, core edges,
//! expansion and a plain-text dump format.

mod dump;
mod generate;
mod hypertree;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::budget::Interrupted;
use crate::graph::mst::sorted_edge_order;
use crate::graph::{OracleError, UnionFind};

pub use dump::{read_dump, write_dump, DumpError};
pub use generate::{gen_all_dw, gen_all_naive, gen_all_smart, gen_voronoi, generate, GenStrategy};
pub use hypertree::best_assemblable_cost;
pub(crate) use generate::for_each_subset;

/// Tree edge of a component between two instance nodes, with the instance
/// edges of the path it stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricEdge {
    pub a: usize,
    pub b: usize,
    pub cost: f64,
    pub path: Vec<usize>,
}

/// A full component: a tree whose leaves are exactly its terminals.
#[derive(Debug, Clone, PartialEq)]
pub struct FullComponent {
    /// Sorted terminal ids.
    pub terminals: Vec<usize>,
    /// Sorted inner (nonterminal) node ids.
    pub inner: Vec<usize>,
    pub edges: Vec<MetricEdge>,
    pub cost: f64,
    /// Indices into `edges` forming the loss forest.
    pub loss: Vec<usize>,
    pub loss_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComponentError {
    #[error("component needs at least two terminals")]
    TooFewTerminals,
    #[error("edge set is not a tree over its nodes")]
    NotATree,
    #[error("terminal {0} is not a leaf")]
    TerminalNotLeaf(usize),
    #[error("inner node {0} is a leaf")]
    InnerLeaf(usize),
    #[error("k must be at least {min}, got {k}")]
    InvalidK { k: usize, min: usize },
    #[error("k >= 4 needs distances between nonterminals (use apsp)")]
    NeedsApsp,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("table limit exceeded while generating components")]
    TableLimit,
    #[error(transparent)]
    Interrupted(#[from] Interrupted),
}

/// How core edges are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreChoice {
    /// Complement of the loss forest.
    LossComplement,
    /// Complement of a random spanning tree of `C / R_C`.
    Random(u64),
}

impl FullComponent {
    /// Builds a component from its tree edges and computes its loss.
    pub fn new(terminals: &[usize], edges: Vec<MetricEdge>) -> Result<Self, ComponentError> {
        let mut terminals = terminals.to_vec();
        terminals.sort_unstable();
        terminals.dedup();
        if terminals.len() < 2 {
            return Err(ComponentError::TooFewTerminals);
        }
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for e in &edges {
            *degree.entry(e.a).or_default() += 1;
            *degree.entry(e.b).or_default() += 1;
        }
        let mut inner: Vec<usize> = degree
            .keys()
            .copied()
            .filter(|v| terminals.binary_search(v).is_err())
            .collect();
        inner.sort_unstable();
        for &t in &terminals {
            if degree.get(&t).copied() != Some(1) {
                return Err(ComponentError::TerminalNotLeaf(t));
            }
        }
        for &v in &inner {
            if degree[&v] < 2 {
                return Err(ComponentError::InnerLeaf(v));
            }
        }
        if edges.len() + 1 != terminals.len() + inner.len() {
            return Err(ComponentError::NotATree);
        }
        let mut c = FullComponent {
            cost: edges.iter().map(|e| e.cost).sum(),
            terminals,
            inner,
            edges,
            loss: Vec::new(),
            loss_cost: 0.0,
        };
        if !c.is_connected() {
            return Err(ComponentError::NotATree);
        }
        let (loss, loss_cost) = c.compute_loss();
        c.loss = loss;
        c.loss_cost = loss_cost;
        Ok(c)
    }

    pub fn size(&self) -> usize {
        self.terminals.len()
    }

    /// All nodes: terminals followed by inner nodes.
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.terminals.iter().chain(self.inner.iter()).copied()
    }

    fn local_index(&self) -> HashMap<usize, usize> {
        self.nodes().enumerate().map(|(i, v)| (v, i)).collect()
    }

    fn is_connected(&self) -> bool {
        let idx = self.local_index();
        let mut uf = UnionFind::new(idx.len());
        for e in &self.edges {
            uf.union(idx[&e.a], idx[&e.b]);
        }
        uf.set_count() == 1
    }

    /// Loss forest: MST of the component with zero-cost edges added between
    /// all terminals; the chosen component edges form Loss(C).
    pub fn compute_loss(&self) -> (Vec<usize>, f64) {
        let idx = self.local_index();
        let mut uf = UnionFind::new(idx.len());
        // Terminals occupy local indices 0..|R_C|; joining them first is the
        // same as taking the zero-cost edges before anything else.
        for i in 1..self.terminals.len() {
            uf.union(0, i);
        }
        let list: Vec<(usize, usize, f64)> = self.edges.iter().map(|e| (idx[&e.a], idx[&e.b], e.cost)).collect();
        let mut loss = Vec::new();
        let mut cost = 0.0;
        for id in sorted_edge_order(&list) {
            let (a, b, c) = list[id];
            if uf.union(a, b) {
                loss.push(id);
                cost += c;
            }
        }
        loss.sort_unstable();
        (loss, cost)
    }

    /// Exactly `|R_C| - 1` edges whose removal separates all terminals.
    pub fn core_edges(&self, choice: CoreChoice) -> Vec<usize> {
        let spanning: Vec<usize> = match choice {
            CoreChoice::LossComplement => self.loss.clone(),
            CoreChoice::Random(seed) => {
                let idx = self.local_index();
                let mut uf = UnionFind::new(idx.len());
                for i in 1..self.terminals.len() {
                    uf.union(0, i);
                }
                let mut order: Vec<usize> = (0..self.edges.len()).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                order
                    .into_iter()
                    .filter(|&i| uf.union(idx[&self.edges[i].a], idx[&self.edges[i].b]))
                    .collect()
            }
        };
        (0..self.edges.len()).filter(|i| !spanning.contains(i)).collect()
    }

    /// Loss-forest owner terminal of every node.
    pub fn loss_owner(&self) -> HashMap<usize, usize> {
        let idx = self.local_index();
        let nodes: Vec<usize> = self.nodes().collect();
        let mut uf = UnionFind::new(nodes.len());
        for &i in &self.loss {
            uf.union(idx[&self.edges[i].a], idx[&self.edges[i].b]);
        }
        let mut root_owner: HashMap<usize, usize> = HashMap::new();
        for (i, &t) in self.terminals.iter().enumerate() {
            root_owner.insert(uf.find(i), t);
        }
        nodes
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, root_owner[&uf.find(i)]))
            .collect()
    }

    /// Union of the instance edges behind every tree edge.
    pub fn expand(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges.iter().flat_map(|e| e.path.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Components keyed by terminal set, at most one (the cheapest) per set.
#[derive(Debug, Clone, Default)]
pub struct ComponentSet {
    pub k: usize,
    components: Vec<FullComponent>,
    index: HashMap<Vec<usize>, usize>,
    /// Candidates dropped because their best tree had an inner terminal.
    pub dropped_inner_terminal: usize,
    /// Candidates replaced by a cheaper one on the same terminal set.
    pub dominated: usize,
}

impl ComponentSet {
    pub fn new(k: usize) -> Self {
        ComponentSet {
            k,
            ..Default::default()
        }
    }

    /// Inserts `c`, keeping the cheaper component per terminal set.
    pub fn insert(&mut self, c: FullComponent) {
        match self.index.get(&c.terminals) {
            Some(&i) => {
                self.dominated += 1;
                if c.cost < self.components[i].cost {
                    self.components[i] = c;
                }
            }
            None => {
                self.index.insert(c.terminals.clone(), self.components.len());
                self.components.push(c);
            }
        }
    }

    pub fn merge(&mut self, other: ComponentSet) {
        self.dropped_inner_terminal += other.dropped_inner_terminal;
        self.dominated += other.dominated;
        for c in other.components {
            self.insert(c);
        }
    }

    pub fn get(&self, terminals: &[usize]) -> Option<&FullComponent> {
        self.index.get(terminals).map(|&i| &self.components[i])
    }

    pub fn components(&self) -> &[FullComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Sorted `(terminal set, cost)` pairs.
    pub fn cost_map(&self) -> Vec<(Vec<usize>, f64)> {
        let mut out: Vec<_> = self.components.iter().map(|c| (c.terminals.clone(), c.cost)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Components ordered by terminal tuple.
    pub fn sort(&mut self) {
        self.components.sort_by(|a, b| a.terminals.len().cmp(&b.terminals.len()).then(a.terminals.cmp(&b.terminals)));
        self.index = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.terminals.clone(), i))
            .collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn me(a: usize, b: usize, cost: f64) -> MetricEdge {
        MetricEdge { a, b, cost, path: Vec::new() }
    }

    #[test]
    fn star_loss_is_cheapest_spoke() {
        let c = FullComponent::new(&[1, 2, 3], vec![me(0, 1, 1.0), me(0, 2, 2.0), me(0, 3, 3.0)]).unwrap();
        assert_eq!(c.cost, 6.0);
        assert_eq!(c.loss, vec![0]);
        assert_eq!(c.loss_cost, 1.0);
        assert_eq!(c.core_edges(CoreChoice::LossComplement), vec![1, 2]);
        let owner = c.loss_owner();
        assert_eq!(owner[&0], 1);
    }

    #[test]
    fn two_component_has_no_loss() {
        let c = FullComponent::new(&[4, 7], vec![me(4, 7, 3.0)]).unwrap();
        assert!(c.loss.is_empty());
        assert_eq!(c.loss_cost, 0.0);
        assert_eq!(c.core_edges(CoreChoice::LossComplement), vec![0]);
        assert_eq!(c.core_edges(CoreChoice::Random(1)), vec![0]);
    }

    #[test]
    fn random_core_separates_terminals() {
        // Two inner nodes: 0 - 1, terminals 2, 3 on node 0 and 4, 5 on node 1.
        let c = FullComponent::new(
            &[2, 3, 4, 5],
            vec![me(0, 1, 1.0), me(0, 2, 1.0), me(0, 3, 1.0), me(1, 4, 1.0), me(1, 5, 1.0)],
        )
        .unwrap();
        for seed in 0..20 {
            let core = c.core_edges(CoreChoice::Random(seed));
            assert_eq!(core.len(), 3);
            let idx = c.local_index();
            let mut uf = UnionFind::new(idx.len());
            for (i, e) in c.edges.iter().enumerate() {
                if !core.contains(&i) {
                    uf.union(idx[&e.a], idx[&e.b]);
                }
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    assert!(!uf.same(i, j));
                }
            }
        }
    }

    #[test]
    fn rejects_non_full_trees() {
        assert_eq!(
            FullComponent::new(&[1, 2, 3], vec![me(1, 2, 1.0), me(2, 3, 1.0)]).unwrap_err(),
            ComponentError::TerminalNotLeaf(2)
        );
        assert_eq!(
            FullComponent::new(&[1, 2], vec![me(1, 0, 1.0), me(0, 2, 1.0), me(0, 9, 1.0)]).unwrap_err(),
            ComponentError::InnerLeaf(9)
        );
    }

    #[test]
    fn set_keeps_cheapest() {
        let mut s = ComponentSet::new(3);
        s.insert(FullComponent::new(&[1, 2], vec![me(1, 2, 3.0)]).unwrap());
        s.insert(FullComponent::new(&[1, 2], vec![me(1, 0, 1.0), me(0, 2, 1.0)]).unwrap());
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(&[1, 2]).unwrap().cost, 2.0);
        assert_eq!(s.dominated, 1);
    }
}
