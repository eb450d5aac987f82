use std::collections::HashMap;

use thiserror::Error;

/// Undirected edge of an [`Instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: f64,
}

impl Edge {
    /// The endpoint opposite to `x`.
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("node {node} out of range (instance has {node_count} nodes)")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("edge {u}-{v} has invalid cost {cost}")]
    InvalidCost { u: usize, v: usize, cost: f64 },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("instance needs at least two terminals, got {0}")]
    TooFewTerminals(usize),
    #[error("graph is not connected")]
    Disconnected,
}

/// A Steiner tree instance: a connected undirected graph with nonnegative
/// edge costs and a set of terminals.
///
/// Parallel edges are collapsed to the cheapest one at construction time;
/// edge ids are assigned in order of first appearance.
#[derive(Debug, Clone)]
pub struct Instance {
    name: Option<String>,
    node_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    terminals: Vec<usize>,
    is_terminal: Vec<bool>,
}

impl Instance {
    pub fn new<E, T>(node_count: usize, edges: E, terminals: T) -> Result<Self, InstanceError>
    where
        E: IntoIterator<Item = (usize, usize, f64)>,
        T: IntoIterator<Item = usize>,
    {
        let mut collapsed: Vec<Edge> = Vec::new();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for (u, v, cost) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(InstanceError::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                return Err(InstanceError::SelfLoop(u));
            }
            if !(cost.is_finite() && cost >= 0.0) {
                return Err(InstanceError::InvalidCost { u, v, cost });
            }
            let key = (u.min(v), u.max(v));
            match seen.get(&key) {
                Some(&id) => {
                    if cost < collapsed[id].cost {
                        collapsed[id].cost = cost;
                    }
                }
                None => {
                    seen.insert(key, collapsed.len());
                    collapsed.push(Edge { u, v, cost });
                }
            }
        }

        let mut is_terminal = vec![false; node_count];
        for t in terminals {
            if t >= node_count {
                return Err(InstanceError::NodeOutOfRange { node: t, node_count });
            }
            is_terminal[t] = true;
        }
        let terminals: Vec<usize> = (0..node_count).filter(|&v| is_terminal[v]).collect();
        if terminals.len() < 2 {
            return Err(InstanceError::TooFewTerminals(terminals.len()));
        }

        let mut adjacency = vec![Vec::new(); node_count];
        for (id, e) in collapsed.iter().enumerate() {
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
        }

        let instance = Instance {
            name: None,
            node_count,
            edges: collapsed,
            adjacency,
            terminals,
            is_terminal,
        };
        if !instance.is_connected() {
            return Err(InstanceError::Disconnected);
        }
        Ok(instance)
    }

    /// Same graph, different terminal set.
    pub fn with_terminals<T>(&self, terminals: T) -> Result<Self, InstanceError>
    where
        T: IntoIterator<Item = usize>,
    {
        let mut is_terminal = vec![false; self.node_count];
        for t in terminals {
            if t >= self.node_count {
                return Err(InstanceError::NodeOutOfRange {
                    node: t,
                    node_count: self.node_count,
                });
            }
            is_terminal[t] = true;
        }
        let terminals: Vec<usize> = (0..self.node_count).filter(|&v| is_terminal[v]).collect();
        if terminals.len() < 2 {
            return Err(InstanceError::TooFewTerminals(terminals.len()));
        }
        Ok(Instance {
            name: self.name.clone(),
            node_count: self.node_count,
            edges: self.edges.clone(),
            adjacency: self.adjacency.clone(),
            terminals,
            is_terminal,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// `(neighbor, edge id)` pairs incident to `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Terminals in increasing node order.
    #[inline]
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    #[inline]
    pub fn is_terminal(&self, v: usize) -> bool {
        self.is_terminal[v]
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count).filter(move |&v| !self.is_terminal[v])
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, id)| id)
    }

    /// `|E| / C(|V|, 2)`.
    pub fn density(&self) -> f64 {
        let n = self.node_count as f64;
        if self.node_count < 2 {
            return 0.0;
        }
        self.edges.len() as f64 / (n * (n - 1.0) / 2.0)
    }

    /// True when every edge cost is an integer; such instances are compared exactly.
    pub fn has_integral_costs(&self) -> bool {
        self.edges.iter().all(|e| e.cost.fract() == 0.0)
    }

    pub fn total_cost(&self, edge_ids: &[usize]) -> f64 {
        edge_ids.iter().map(|&id| self.edges[id].cost).sum()
    }

    fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.node_count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_parallel_edges_to_min_cost() {
        let inst = Instance::new(3, [(0, 1, 5.0), (1, 2, 1.0), (1, 0, 3.0)], [0, 2]).unwrap();
        assert_eq!(inst.edge_count(), 2);
        assert_eq!(inst.edge(0).cost, 3.0);
        assert_eq!(inst.edge_between(1, 0), Some(0));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            Instance::new(2, [(0, 0, 1.0)], [0, 1]).unwrap_err(),
            InstanceError::SelfLoop(0)
        );
        assert!(matches!(
            Instance::new(2, [(0, 1, -1.0)], [0, 1]),
            Err(InstanceError::InvalidCost { .. })
        ));
        assert_eq!(
            Instance::new(2, [(0, 1, 1.0)], [0]).unwrap_err(),
            InstanceError::TooFewTerminals(1)
        );
        assert_eq!(
            Instance::new(4, [(0, 1, 1.0), (2, 3, 1.0)], [0, 3]).unwrap_err(),
            InstanceError::Disconnected
        );
        assert!(matches!(
            Instance::new(2, [(0, 5, 1.0)], [0, 1]),
            Err(InstanceError::NodeOutOfRange { node: 5, .. })
        ));
    }

    #[test]
    fn terminals_are_sorted_and_deduplicated() {
        let inst = Instance::new(3, [(0, 1, 1.0), (1, 2, 1.0)], [2, 0, 2]).unwrap();
        assert_eq!(inst.terminals(), &[0, 2]);
        assert_eq!(inst.nonterminals().collect::<Vec<_>>(), vec![1]);
    }
}
