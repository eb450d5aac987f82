use std::collections::HashMap;

use super::FullComponent;

/// Cheapest set of components forming a spanning tree of the hypergraph
/// `(terminals, components)`, i.e. the best tree assemblable from them.
/// Returns the cost and the chosen component indices.
///
/// Exhaustive branch and bound; meant for small terminal sets.
pub fn best_assemblable_cost(components: &[FullComponent], terminals: &[usize]) -> Option<(f64, Vec<usize>)> {
    let local: HashMap<usize, usize> = terminals.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut order: Vec<usize> = (0..components.len())
        .filter(|&i| components[i].terminals.iter().all(|t| local.contains_key(t)))
        .collect();
    order.sort_by(|&a, &b| components[a].cost.total_cmp(&components[b].cost).then(a.cmp(&b)));
    let sets: Vec<Vec<usize>> = order
        .iter()
        .map(|&i| components[i].terminals.iter().map(|t| local[t]).collect())
        .collect();
    let costs: Vec<f64> = order.iter().map(|&i| components[i].cost).collect();

    struct Search<'a> {
        sets: &'a [Vec<usize>],
        costs: &'a [f64],
        target: usize,
        best: f64,
        best_pick: Vec<usize>,
        pick: Vec<usize>,
    }

    fn find(parent: &[usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }

    impl Search<'_> {
        fn run(&mut self, i: usize, parent: &mut Vec<usize>, rank: usize, cost: f64) {
            if cost >= self.best {
                return;
            }
            if rank == self.target {
                self.best = cost;
                self.best_pick = self.pick.clone();
                return;
            }
            if i == self.sets.len() {
                return;
            }
            let roots: Vec<usize> = self.sets[i].iter().map(|&t| find(parent, t)).collect();
            let mut distinct = roots.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() == roots.len() && rank + roots.len() - 1 <= self.target {
                let saved = parent.clone();
                for &r in &roots[1..] {
                    parent[r] = roots[0];
                }
                self.pick.push(i);
                self.run(i + 1, parent, rank + roots.len() - 1, cost + self.costs[i]);
                self.pick.pop();
                *parent = saved;
            }
            self.run(i + 1, parent, rank, cost);
        }
    }

    let mut search = Search {
        sets: &sets,
        costs: &costs,
        target: terminals.len().saturating_sub(1),
        best: f64::INFINITY,
        best_pick: Vec::new(),
        pick: Vec::new(),
    };
    let mut parent: Vec<usize> = (0..terminals.len()).collect();
    search.run(0, &mut parent, 0, 0.0);
    if search.best.is_finite() {
        let mut chosen: Vec<usize> = search.best_pick.iter().map(|&i| order[i]).collect();
        chosen.sort_unstable();
        Some((search.best, chosen))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::MetricEdge;

    fn comp(terminals: &[usize], cost: f64) -> FullComponent {
        // Star through a private inner node 100 + first terminal.
        let center = 100 + terminals[0] * 10 + terminals.len();
        let per = cost / terminals.len() as f64;
        let edges = if terminals.len() == 2 {
            vec![MetricEdge { a: terminals[0], b: terminals[1], cost, path: vec![] }]
        } else {
            terminals.iter().map(|&t| MetricEdge { a: center, b: t, cost: per, path: vec![] }).collect()
        };
        FullComponent::new(terminals, edges).unwrap()
    }

    #[test]
    fn picks_cheapest_spanning_hypertree() {
        let comps = vec![comp(&[0, 1], 2.0), comp(&[1, 2], 2.0), comp(&[0, 2], 2.0), comp(&[0, 1, 2], 3.0)];
        let (cost, pick) = best_assemblable_cost(&comps, &[0, 1, 2]).unwrap();
        assert_eq!(cost, 3.0);
        assert_eq!(pick, vec![3]);
        let (cost, pick) = best_assemblable_cost(&comps[..3], &[0, 1, 2]).unwrap();
        assert_eq!(cost, 4.0);
        assert_eq!(pick.len(), 2);
        assert!(best_assemblable_cost(&comps[..1], &[0, 1, 2]).is_none());
    }
}
