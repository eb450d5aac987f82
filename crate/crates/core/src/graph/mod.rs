//! Graph substrate: instances, shortest paths, metric closure, spanning
//! trees, Voronoi regions and max-flow.

mod dsu;
pub mod flow;
mod instance;
pub mod mst;
pub mod paths;
pub mod voronoi;

pub use dsu::UnionFind;
pub use flow::{FlowNetwork, FlowResult};
pub use instance::{Edge, Instance, InstanceError};
pub use mst::{mst, Disconnected, Tree, WeightedGraph};
pub use paths::{DistMode, DistanceOracle, OracleError, PathPolicy};
pub use voronoi::VoronoiPartition;

/// Complete graph on a node subset with shortest-path costs.
#[derive(Debug, Clone)]
pub struct MetricClosure {
    /// Original node id of each local index.
    pub nodes: Vec<usize>,
    /// Graph over local indices `0..nodes.len()`.
    pub graph: WeightedGraph,
}

impl MetricClosure {
    pub fn original_pair(&self, edge: usize) -> (usize, usize) {
        let (a, b, _) = self.graph.edges[edge];
        (self.nodes[a], self.nodes[b])
    }
}

/// Metric closure over `nodes`. Pairs with infinite distance (disconnected
/// under forbid) get no edge; with `valid_only`, invalid pairs are skipped too.
pub fn metric_closure(
    oracle: &DistanceOracle,
    nodes: &[usize],
    valid_only: bool,
) -> Result<MetricClosure, OracleError> {
    let mut graph = WeightedGraph::new(nodes.len());
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let (u, v) = (nodes[i], nodes[j]);
            let d = oracle.distance(u, v)?;
            if !d.is_finite() || (valid_only && !oracle.is_valid(u, v)) {
                continue;
            }
            graph.add_edge(i, j, d);
        }
    }
    Ok(MetricClosure {
        nodes: nodes.to_vec(),
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_path_endpoints() {
        let inst = Instance::new(3, [(0, 1, 1.0), (1, 2, 1.0)], [0, 2]).unwrap();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        let c = metric_closure(&o, &[0, 2], true).unwrap();
        assert_eq!(c.graph.edges, vec![(0, 1, 2.0)]);
    }

    #[test]
    fn closure_of_star_terminals_is_triangle() {
        let inst = Instance::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], [1, 2, 3]).unwrap();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        let c = metric_closure(&o, inst.terminals(), true).unwrap();
        assert_eq!(c.graph.edges.len(), 3);
        assert!(c.graph.edges.iter().all(|e| e.2 == 2.0));
        assert!(metric_closure(&o, &[1], true).unwrap().graph.edges.is_empty());
    }

    #[test]
    fn closure_reports_missing_pairs() {
        let inst = Instance::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], [0, 3]).unwrap();
        let o = DistanceOracle::build(&inst, DistMode::Sssp, PathPolicy::Prefer);
        assert_eq!(
            metric_closure(&o, &[1, 2], false).unwrap_err(),
            OracleError::MissingPair(1, 2)
        );
    }
}
