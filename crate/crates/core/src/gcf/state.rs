//! The terminal metric graph under contraction, kept as its MST.

use crate::graph::mst::{dense_prim, sorted_edge_order};
use crate::graph::UnionFind;

use super::save::{SaveKind, SaveOracle};

/// Where an MST edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// A shortest-path distance between two terminals.
    Metric,
    /// Added when the tagged component was contracted.
    Contraction(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub cost: f64,
    pub origin: EdgeOrigin,
}

/// MST of the (contracted) terminal metric graph over local ids `0..n`.
///
/// Only MST edges are kept: for any edge set `A`, `MST(M + A)` equals
/// `MST(MST(M) + A)`.
#[derive(Debug, Clone)]
pub struct ContractionState {
    n: usize,
    tree: Vec<TreeEdge>,
    cost: f64,
    oracle: SaveOracle,
}

impl ContractionState {
    /// From a complete distance function over `n` terminals.
    pub fn from_metric(n: usize, dist: impl Fn(usize, usize) -> f64, kind: SaveKind) -> Self {
        let (pairs, _) = dense_prim(n, |i, j| Some(dist(i, j))).expect("complete graph is connected");
        let edges = pairs.into_iter().map(|(p, c)| (p, c, dist(p, c))).collect::<Vec<_>>();
        Self::from_tree(n, &edges, kind)
    }

    /// From a spanning tree over `0..n` given as `(a, b, cost)`.
    pub fn from_tree(n: usize, edges: &[(usize, usize, f64)], kind: SaveKind) -> Self {
        assert_eq!(edges.len() + 1, n.max(1), "spanning tree needs n - 1 edges");
        let tree: Vec<TreeEdge> = edges
            .iter()
            .map(|&(a, b, cost)| TreeEdge {
                a,
                b,
                cost,
                origin: EdgeOrigin::Metric,
            })
            .collect();
        let cost = tree.iter().map(|e| e.cost).sum();
        let oracle = SaveOracle::build(kind, n.max(1), edges);
        ContractionState { n, tree, cost, oracle }
    }

    pub fn terminal_count(&self) -> usize {
        self.n
    }

    pub fn mst_cost(&self) -> f64 {
        self.cost
    }

    pub fn tree(&self) -> &[TreeEdge] {
        &self.tree
    }

    pub fn save_kind(&self) -> SaveKind {
        self.oracle.kind()
    }

    /// Largest edge cost on the MST path between `u` and `v`.
    pub fn bottleneck(&self, u: usize, v: usize) -> f64 {
        self.oracle.query(u, v)
    }

    /// `d(MST(M)) - d(MST(M / members))`.
    ///
    /// Contracting `members` removes one MST edge per branching point of
    /// their bottleneck hierarchy, so the saving is the MST weight of the
    /// members under bottleneck distances.
    pub fn save(&self, members: &[usize]) -> f64 {
        match members.len() {
            0 | 1 => 0.0,
            2 => self.bottleneck(members[0], members[1]),
            m => {
                let (_, total) = dense_prim(m, |i, j| Some(self.bottleneck(members[i], members[j])))
                    .expect("complete graph is connected");
                total
            }
        }
    }

    /// Adds `edges` to the metric graph and recomputes the MST. Returns the
    /// decrease in MST cost.
    pub fn contract(&mut self, edges: &[(usize, usize, f64)], tag: usize) -> f64 {
        let mut all: Vec<TreeEdge> = self.tree.clone();
        all.extend(edges.iter().map(|&(a, b, cost)| TreeEdge {
            a,
            b,
            cost,
            origin: EdgeOrigin::Contraction(tag),
        }));
        let list: Vec<(usize, usize, f64)> = all.iter().map(|e| (e.a, e.b, e.cost)).collect();
        let mut uf = UnionFind::new(self.n);
        let mut tree = Vec::with_capacity(self.n.saturating_sub(1));
        for id in sorted_edge_order(&list) {
            let e = all[id];
            if uf.union(e.a, e.b) {
                tree.push(e);
            }
        }
        let before = self.cost;
        self.cost = tree.iter().map(|e| e.cost).sum();
        self.tree = tree;
        let plain: Vec<(usize, usize, f64)> = self.tree.iter().map(|e| (e.a, e.b, e.cost)).collect();
        self.oracle.update(self.n, &plain, edges);
        before - self.cost
    }

    /// Joins `members` with zero-cost edges.
    pub fn contract_full(&mut self, members: &[usize], tag: usize) -> f64 {
        let edges: Vec<(usize, usize, f64)> = members.iter().skip(1).map(|&t| (members[0], t, 0.0)).collect();
        self.contract(&edges, tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_state(kind: SaveKind) -> ContractionState {
        ContractionState::from_tree(3, &[(0, 1, 1.0), (1, 2, 5.0)], kind)
    }

    #[test]
    fn save_of_three_on_a_path() {
        for kind in [SaveKind::Matrix, SaveKind::Static, SaveKind::Dynamic] {
            let s = path_state(kind);
            assert_eq!(s.save(&[0, 2]), 5.0);
            assert_eq!(s.save(&[0, 1, 2]), 6.0);
            let mut c = s.clone();
            assert_eq!(c.contract_full(&[0, 1, 2], 0), 6.0);
            assert_eq!(c.mst_cost(), 0.0);
            assert_eq!(c.save(&[0, 2]), 0.0);
        }
    }

    #[test]
    fn metric_start() {
        let d = [[0.0, 2.0, 3.0], [2.0, 0.0, 4.0], [3.0, 4.0, 0.0]];
        let s = ContractionState::from_metric(3, |i, j| d[i][j], SaveKind::Static);
        assert_eq!(s.mst_cost(), 5.0);
        assert_eq!(s.bottleneck(1, 2), 3.0);
    }
}
