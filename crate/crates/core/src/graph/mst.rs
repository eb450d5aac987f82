use thiserror::Error;

use super::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("graph is disconnected ({components} components)")]
pub struct Disconnected {
    pub components: usize,
}

/// Small undirected weighted graph on nodes `0..node_count`, used for
/// metric closures and other derived graphs.
#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    pub node_count: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(node_count: usize) -> Self {
        WeightedGraph {
            node_count,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cost: f64) -> usize {
        self.edges.push((u, v, cost));
        self.edges.len() - 1
    }
}

/// A spanning tree (or forest) given by indices into the source edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub edges: Vec<usize>,
    pub cost: f64,
}

/// Edge order used by every MST routine: cost, then input index.
pub(crate) fn sorted_edge_order(edges: &[(usize, usize, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edges[a].2.total_cmp(&edges[b].2).then(a.cmp(&b)));
    order
}

/// Minimum spanning forest by Kruskal.
pub fn minimum_spanning_forest(g: &WeightedGraph) -> (Tree, usize) {
    let mut uf = UnionFind::new(g.node_count);
    let mut tree = Vec::with_capacity(g.node_count.saturating_sub(1));
    let mut cost = 0.0;
    for id in sorted_edge_order(&g.edges) {
        let (u, v, c) = g.edges[id];
        if uf.union(u, v) {
            tree.push(id);
            cost += c;
        }
    }
    (Tree { edges: tree, cost }, uf.set_count())
}

/// Minimum spanning tree; ties are broken by input edge index.
pub fn mst(g: &WeightedGraph) -> Result<Tree, Disconnected> {
    let (tree, components) = minimum_spanning_forest(g);
    if components > 1 {
        return Err(Disconnected { components });
    }
    Ok(tree)
}

/// Prim on a dense symmetric cost matrix. `None` entries are absent edges.
/// Returns `(parent, cost)` pairs for nodes `1..n` rooted at node 0.
pub fn dense_prim(n: usize, cost: impl Fn(usize, usize) -> Option<f64>) -> Result<(Vec<(usize, usize)>, f64), Disconnected> {
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    best[0] = 0.0;
    let mut edges = Vec::with_capacity(n - 1);
    let mut total = 0.0;
    for _ in 0..n {
        let mut pick = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && best[v].is_finite() && (pick == usize::MAX || best[v] < best[pick]) {
                pick = v;
            }
        }
        if pick == usize::MAX {
            let components = in_tree.iter().filter(|&&x| !x).count() + 1;
            return Err(Disconnected { components });
        }
        in_tree[pick] = true;
        if parent[pick] != usize::MAX {
            edges.push((parent[pick], pick));
            total += best[pick];
        }
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            if let Some(c) = cost(pick, v) {
                if c < best[v] {
                    best[v] = c;
                    parent[v] = pick;
                }
            }
        }
    }
    Ok((edges, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(a: f64, b: f64, c: f64) -> WeightedGraph {
        WeightedGraph {
            node_count: 3,
            edges: vec![(0, 1, a), (1, 2, b), (0, 2, c)],
        }
    }

    #[test]
    fn triangle_drops_heaviest_edge() {
        let t = mst(&triangle(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(t.edges, vec![0, 1]);
        assert_eq!(t.cost, 3.0);
    }

    #[test]
    fn equal_costs_break_by_index() {
        let t = mst(&triangle(2.0, 2.0, 2.0)).unwrap();
        assert_eq!(t.edges, vec![0, 1]);
        assert_eq!(t.cost, 4.0);
    }

    #[test]
    fn single_node_is_empty_tree() {
        let t = mst(&WeightedGraph::new(1)).unwrap();
        assert!(t.edges.is_empty());
        assert_eq!(t.cost, 0.0);
    }

    #[test]
    fn disconnected_is_error() {
        let mut g = WeightedGraph::new(4);
        g.add_edge(0, 1, 1.0);
        g.add_edge(2, 3, 1.0);
        assert_eq!(mst(&g), Err(Disconnected { components: 2 }));
    }

    #[test]
    fn prim_matches_kruskal() {
        let g = triangle(1.0, 2.0, 3.0);
        let (edges, cost) = dense_prim(3, |a, b| {
            g.edges
                .iter()
                .find(|e| (e.0 == a && e.1 == b) || (e.0 == b && e.1 == a))
                .map(|e| e.2)
        })
        .unwrap();
        assert_eq!(edges.len(), 2);
        assert_eq!(cost, 3.0);
    }
}
