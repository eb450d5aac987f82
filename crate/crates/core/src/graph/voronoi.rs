use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::paths::ordered::OrdF64;
use super::Instance;

/// Assignment of every node to its nearest terminal.
///
/// Exact distance ties go to the terminal with the lowest node index.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiPartition {
    owner: Vec<usize>,
    dist: Vec<f64>,
    /// `(pred node, edge id)` toward the owner; empty when built from distances.
    pred: Vec<(usize, usize)>,
}

impl VoronoiPartition {
    /// One multi-source search with all terminals as sources.
    pub fn compute(inst: &Instance) -> Self {
        let n = inst.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut owner = vec![usize::MAX; n];
        let mut pred = vec![(usize::MAX, usize::MAX); n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        for &t in inst.terminals() {
            dist[t] = 0.0;
            owner[t] = t;
            heap.push(Reverse((OrdF64(0.0), t, t)));
        }
        // Heap order (distance, owner) finalizes every node with its
        // lexicographically smallest label.
        while let Some(Reverse((OrdF64(d), o, x))) = heap.pop() {
            if done[x] {
                continue;
            }
            done[x] = true;
            for &(w, e) in inst.neighbors(x) {
                if done[w] || inst.is_terminal(w) {
                    continue;
                }
                let cand = d + inst.edge(e).cost;
                if cand < dist[w] || (cand == dist[w] && o < owner[w]) {
                    dist[w] = cand;
                    owner[w] = o;
                    pred[w] = (x, e);
                    heap.push(Reverse((OrdF64(cand), o, w)));
                }
            }
        }
        VoronoiPartition { owner, dist, pred }
    }

    /// Builds the partition from a terminal-to-node distance function.
    pub fn from_distances(inst: &Instance, dist_fn: impl Fn(usize, usize) -> f64) -> Self {
        let n = inst.node_count();
        let mut owner = vec![usize::MAX; n];
        let mut dist = vec![f64::INFINITY; n];
        for v in 0..n {
            if inst.is_terminal(v) {
                owner[v] = v;
                dist[v] = 0.0;
                continue;
            }
            for &t in inst.terminals() {
                let d = dist_fn(t, v);
                if d < dist[v] {
                    dist[v] = d;
                    owner[v] = t;
                }
            }
        }
        VoronoiPartition {
            owner,
            dist,
            pred: Vec::new(),
        }
    }

    /// Edge ids of the shortest path from the owner of `v` to `v`, if known.
    pub fn path_from_owner(&self, v: usize) -> Option<Vec<usize>> {
        if self.pred.is_empty() {
            return None;
        }
        let mut edges = Vec::new();
        let mut x = v;
        while self.pred[x].0 != usize::MAX {
            edges.push(self.pred[x].1);
            x = self.pred[x].0;
        }
        edges.reverse();
        Some(edges)
    }

    #[inline]
    pub fn owner(&self, v: usize) -> usize {
        self.owner[v]
    }

    /// Distance from `v` to its owning terminal.
    #[inline]
    pub fn owner_distance(&self, v: usize) -> f64 {
        self.dist[v]
    }

    /// Nodes owned by `t`, in increasing order.
    pub fn region(&self, t: usize) -> Vec<usize> {
        (0..self.owner.len()).filter(|&v| self.owner[v] == t).collect()
    }

    /// Nonterminals owned by any terminal of `terminals`, in increasing order.
    pub fn nonterminals_of(&self, inst: &Instance, terminals: &[usize]) -> Vec<usize> {
        inst.nonterminals()
            .filter(|&v| terminals.contains(&self.owner[v]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_goes_to_lower_terminal() {
        let inst = Instance::new(3, [(0, 1, 1.0), (1, 2, 1.0)], [0, 2]).unwrap();
        let vor = VoronoiPartition::compute(&inst);
        assert_eq!(vor.owner(1), 0);
        assert_eq!(vor.owner(2), 2);
        assert_eq!(vor.region(0), vec![0, 1]);
    }

    #[test]
    fn tie_propagates_through_zero_edges() {
        // 0 -1- 2 -0- 3 -1- 4, terminals 0 and 4; node 2 and 3 tie.
        let inst = Instance::new(
            5,
            [(0, 2, 1.0), (2, 3, 0.0), (3, 4, 1.0), (1, 2, 5.0)],
            [0, 4],
        )
        .unwrap();
        let vor = VoronoiPartition::compute(&inst);
        assert_eq!(vor.owner(2), 0);
        assert_eq!(vor.owner(3), 0);
        assert_eq!(vor.owner(1), 0);
        let via = VoronoiPartition::from_distances(&inst, |t, v| {
            let (d, _) = crate::graph::paths::dijkstra(&inst, t, false);
            d[v]
        });
        assert_eq!(via.owner, vor.owner);
        assert_eq!(via.dist, vor.dist);
        assert_eq!(vor.path_from_owner(3), Some(vec![0, 1]));
    }
}
