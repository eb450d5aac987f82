//! Bottleneck queries on the current terminal MST: `query(u, v)` is the
//! largest edge cost on the tree path between `u` and `v`.

use crate::graph::mst::sorted_edge_order;
use crate::graph::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SaveKind {
    /// Full `|R| x |R|` table, rebuilt after every contraction.
    Matrix,
    /// Kruskal tree with Euler-tour LCA, rebuilt after every contraction.
    Static,
    /// Kruskal tree updated in place per inserted edge.
    Dynamic,
}

impl SaveKind {
    pub fn name(self) -> &'static str {
        match self {
            SaveKind::Matrix => "matrix",
            SaveKind::Static => "static",
            SaveKind::Dynamic => "dynamic",
        }
    }
}

#[derive(Debug, Clone)]
pub enum SaveOracle {
    Matrix(MatrixOracle),
    Static(StaticOracle),
    Dynamic(DynamicOracle),
}

impl SaveOracle {
    pub fn build(kind: SaveKind, n: usize, tree: &[(usize, usize, f64)]) -> Self {
        match kind {
            SaveKind::Matrix => SaveOracle::Matrix(MatrixOracle::build(n, tree)),
            SaveKind::Static => SaveOracle::Static(StaticOracle::build(n, tree)),
            SaveKind::Dynamic => SaveOracle::Dynamic(DynamicOracle::build(n, tree)),
        }
    }

    pub fn kind(&self) -> SaveKind {
        match self {
            SaveOracle::Matrix(_) => SaveKind::Matrix,
            SaveOracle::Static(_) => SaveKind::Static,
            SaveOracle::Dynamic(_) => SaveKind::Dynamic,
        }
    }

    pub fn query(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        match self {
            SaveOracle::Matrix(o) => o.query(u, v),
            SaveOracle::Static(o) => o.query(u, v),
            SaveOracle::Dynamic(o) => o.query(u, v),
        }
    }

    /// Brings the oracle up to date after `inserted` edges were added and
    /// the MST became `tree`.
    pub fn update(&mut self, n: usize, tree: &[(usize, usize, f64)], inserted: &[(usize, usize, f64)]) {
        match self {
            SaveOracle::Matrix(o) => *o = MatrixOracle::build(n, tree),
            SaveOracle::Static(o) => *o = StaticOracle::build(n, tree),
            SaveOracle::Dynamic(o) => {
                for &(u, v, c) in inserted {
                    o.insert(u, v, c);
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatrixOracle {
    n: usize,
    table: Vec<f64>,
}

impl MatrixOracle {
    pub fn build(n: usize, tree: &[(usize, usize, f64)]) -> Self {
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(a, b, c) in tree {
            adj[a].push((b, c));
            adj[b].push((a, c));
        }
        let mut table = vec![0.0f64; n * n];
        let mut stack = Vec::new();
        for s in 0..n {
            let row = &mut table[s * n..(s + 1) * n];
            let mut seen = vec![false; n];
            seen[s] = true;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &(y, c) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        row[y] = row[x].max(c);
                        stack.push(y);
                    }
                }
            }
        }
        MatrixOracle { n, table }
    }

    pub fn query(&self, u: usize, v: usize) -> f64 {
        self.table[u * self.n + v]
    }
}

/// Builds the Kruskal reconstruction tree: leaves `0..n`, one inner node per
/// tree edge with that edge's cost; the LCA of two leaves is their bottleneck.
fn kruskal_tree(n: usize, tree: &[(usize, usize, f64)]) -> (Vec<usize>, Vec<[usize; 2]>, Vec<f64>, usize) {
    let total = 2 * n - 1;
    let mut parent = vec![usize::MAX; total];
    let mut children = vec![[usize::MAX; 2]; total];
    let mut cost = vec![f64::NEG_INFINITY; total];
    let mut uf = UnionFind::new(n);
    let mut top: Vec<usize> = (0..n).collect();
    let mut next = n;
    for id in sorted_edge_order(tree) {
        let (a, b, c) = tree[id];
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            continue;
        }
        let (ta, tb) = (top[ra], top[rb]);
        uf.union(ra, rb);
        let r = uf.find(ra);
        parent[ta] = next;
        parent[tb] = next;
        children[next] = [ta, tb];
        cost[next] = c;
        top[r] = next;
        next += 1;
    }
    debug_assert_eq!(next, total, "tree must span all terminals");
    let root = if n == 1 { 0 } else { total - 1 };
    (parent, children, cost, root)
}

#[derive(Debug, Clone)]
pub struct StaticOracle {
    cost: Vec<f64>,
    first: Vec<usize>,
    /// Sparse table over the Euler tour, storing node ids of minimum depth.
    sparse: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl StaticOracle {
    pub fn build(n: usize, tree: &[(usize, usize, f64)]) -> Self {
        let (_, children, cost, root) = kruskal_tree(n, tree);
        let total = children.len();
        let mut depth = vec![0usize; total];
        let mut first = vec![usize::MAX; total];
        let mut euler = Vec::with_capacity(2 * total);
        // Iterative DFS emitting a node on entry and after each child.
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some((x, i)) = stack.pop() {
            if i == 0 {
                first[x] = euler.len();
            }
            euler.push(x);
            let kids = children[x];
            if i < 2 && kids[i] != usize::MAX {
                stack.push((x, i + 1));
                depth[kids[i]] = depth[x] + 1;
                stack.push((kids[i], 0));
            }
        }
        let len = euler.len();
        let mut sparse = vec![euler];
        let mut width = 1;
        while 2 * width <= len {
            let prev = sparse.last().unwrap();
            let level: Vec<usize> = (0..=len - 2 * width)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + width]);
                    if depth[a] <= depth[b] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            sparse.push(level);
            width *= 2;
        }
        StaticOracle {
            cost,
            first,
            sparse,
            depth,
        }
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (mut l, mut r) = (self.first[u], self.first[v]);
        if l > r {
            std::mem::swap(&mut l, &mut r);
        }
        let span = r - l + 1;
        let k = usize::BITS as usize - 1 - span.leading_zeros() as usize;
        let (a, b) = (self.sparse[k][l], self.sparse[k][r + 1 - (1 << k)]);
        if self.depth[a] <= self.depth[b] {
            a
        } else {
            b
        }
    }

    pub fn query(&self, u: usize, v: usize) -> f64 {
        self.cost[self.lca(u, v)]
    }
}

#[derive(Debug, Clone)]
pub struct DynamicOracle {
    parent: Vec<usize>,
    children: Vec<[usize; 2]>,
    cost: Vec<f64>,
    root: usize,
    leaves: usize,
}

impl DynamicOracle {
    pub fn build(n: usize, tree: &[(usize, usize, f64)]) -> Self {
        let (parent, children, cost, root) = kruskal_tree(n, tree);
        DynamicOracle {
            parent,
            children,
            cost,
            root,
            leaves: n,
        }
    }

    fn path_to_root(&self, mut x: usize) -> Vec<usize> {
        let mut path = vec![x];
        while self.parent[x] != usize::MAX {
            x = self.parent[x];
            path.push(x);
        }
        path
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let pu = self.path_to_root(u);
        let mut x = v;
        loop {
            if pu.contains(&x) {
                return x;
            }
            x = self.parent[x];
        }
    }

    pub fn query(&self, u: usize, v: usize) -> f64 {
        self.cost[self.lca(u, v)]
    }

    /// Node count of the tree (leaves plus inner nodes).
    pub fn size(&self) -> (usize, usize) {
        (self.leaves, self.children.len() - self.leaves)
    }

    /// Inserts edge `(u, v)` of cost `c` into the MST: the bottleneck node
    /// `L` on the `u`–`v` path is replaced by a new node of cost `c`, and
    /// the path nodes costlier than `c` are re-stacked above it by cost.
    pub fn insert(&mut self, u: usize, v: usize, c: f64) {
        if u == v {
            return;
        }
        let l = self.lca(u, v);
        if c >= self.cost[l] {
            return;
        }
        let climb = |from: usize| -> Vec<usize> {
            let mut path = vec![from];
            let mut x = from;
            while self.parent[x] != l {
                x = self.parent[x];
                path.push(x);
            }
            path
        };
        let (p1, p2) = (climb(u), climb(v));
        let split = |p: &[usize]| -> usize {
            // Leaves stay; inner nodes stay while cheaper than c.
            let mut i = 0;
            while i + 1 < p.len() && self.cost[p[i + 1]] < c {
                i += 1;
            }
            i
        };
        let (s1, s2) = (split(&p1), split(&p2));
        let (a, b) = (p1[s1], p2[s2]);

        // Merge the costlier path nodes by cost; each keeps its off-path child.
        let mut up: Vec<(usize, usize)> = Vec::new();
        for (p, s) in [(&p1, s1), (&p2, s2)] {
            for i in s + 1..p.len() {
                up.push((p[i], p[i - 1]));
            }
        }
        up.sort_by(|x, y| self.cost[x.0].total_cmp(&self.cost[y.0]));

        let above = self.parent[l];
        let u0 = l;
        self.cost[u0] = c;
        self.children[u0] = [a, b];
        self.parent[a] = u0;
        self.parent[b] = u0;
        let mut prev = u0;
        for (x, old_child) in up {
            let slot = if self.children[x][0] == old_child { 0 } else { 1 };
            self.children[x][slot] = prev;
            self.parent[prev] = x;
            prev = x;
        }
        self.parent[prev] = above;
        if above == usize::MAX {
            self.root = prev;
        } else {
            let slot = if self.children[above][0] == l { 0 } else { 1 };
            self.children[above][slot] = prev;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_bottlenecks() {
        let tree = vec![(0, 1, 1.0), (1, 2, 5.0), (2, 3, 2.0)];
        for kind in [SaveKind::Matrix, SaveKind::Static, SaveKind::Dynamic] {
            let o = SaveOracle::build(kind, 4, &tree);
            assert_eq!(o.query(0, 1), 1.0);
            assert_eq!(o.query(0, 3), 5.0);
            assert_eq!(o.query(2, 3), 2.0);
            assert_eq!(o.query(3, 3), 0.0);
        }
    }

    #[test]
    fn dynamic_insert_matches_rebuild() {
        let tree = vec![(0, 1, 1.0), (1, 2, 5.0), (2, 3, 2.0), (3, 4, 7.0)];
        let mut d = DynamicOracle::build(5, &tree);
        d.insert(0, 4, 0.0);
        // New MST: 0-1 (1), 1-2 (5), 2-3 (2), 0-4 (0).
        let rebuilt = MatrixOracle::build(5, &[(0, 1, 1.0), (1, 2, 5.0), (2, 3, 2.0), (0, 4, 0.0)]);
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    assert_eq!(d.query(u, v), rebuilt.query(u, v), "{u} {v}");
                }
            }
        }
        assert_eq!(d.size(), (5, 4));
        d.insert(2, 3, 0.0);
        assert_eq!(d.query(2, 3), 0.0);
    }
}
