//! Dinic max-flow on real capacities.

use std::collections::VecDeque;

const FLOW_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
}

/// Directed capacitated network. Arcs are stored in pairs with their reverse.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub value: f64,
    /// `true` for nodes not reachable from the source in the residual
    /// network, i.e. the sink side of a minimum cut.
    pub sink_side: Vec<bool>,
}

impl FlowNetwork {
    pub fn new(node_count: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); node_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        debug_assert!(cap >= 0.0);
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap: cap.max(0.0) });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0.0 });
    }

    /// Maximum flow from `source` into the set `sinks`, realized by merging
    /// the sinks into one super-sink. The network itself is left untouched.
    pub fn max_flow(&self, source: usize, sinks: &[usize]) -> FlowResult {
        let mut net = self.clone();
        let sink = net.add_node();
        for &t in sinks {
            if t != source {
                net.add_arc(t, sink, f64::INFINITY);
            }
        }
        let value = net.dinic(source, sink);
        let reach = net.residual_reach(source);
        let sink_side = reach[..self.node_count()].iter().map(|&r| !r).collect();
        FlowResult { value, sink_side }
    }

    fn dinic(&mut self, s: usize, t: usize) -> f64 {
        let n = self.out.len();
        let mut total = 0.0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &a in &self.out[x] {
                    let arc = &self.arcs[a];
                    if arc.cap > FLOW_EPS && level[arc.to] == usize::MAX {
                        level[arc.to] = level[x] + 1;
                        queue.push_back(arc.to);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; n];
            loop {
                let pushed = self.augment(s, t, f64::INFINITY, &level, &mut next);
                if pushed <= FLOW_EPS {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(&mut self, x: usize, t: usize, limit: f64, level: &[usize], next: &mut [usize]) -> f64 {
        if x == t {
            return limit;
        }
        while next[x] < self.out[x].len() {
            let a = self.out[x][next[x]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > FLOW_EPS && level[to] == level[x] + 1 {
                let pushed = self.augment(to, t, limit.min(cap), level, next);
                if pushed > FLOW_EPS {
                    self.arcs[a].cap -= pushed;
                    self.arcs[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
            next[x] += 1;
        }
        0.0
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &a in &self.out[x] {
                let arc = &self.arcs[a];
                if arc.cap > FLOW_EPS && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::new(2);
        net.add_arc(0, 1, 1.0);
        let r = net.max_flow(0, &[1]);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.sink_side, vec![false, true]);
    }

    #[test]
    fn diamond() {
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, 2.0);
        net.add_arc(0, 2, 1.0);
        net.add_arc(1, 3, 1.0);
        net.add_arc(2, 3, 2.0);
        assert_eq!(net.max_flow(0, &[3]).value, 2.0);
    }

    #[test]
    fn zero_capacity_cut_is_source_alone() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 0.0);
        net.add_arc(1, 2, 0.0);
        let r = net.max_flow(0, &[2]);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.sink_side, vec![false, true, true]);
    }

    #[test]
    fn multiple_sinks_merge() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 1.5);
        net.add_arc(0, 2, 2.5);
        assert_eq!(net.max_flow(0, &[1, 2]).value, 4.0);
    }
}
