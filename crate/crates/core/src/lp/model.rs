//! The hypergraphic subtour relaxation over a set of full components.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::components::ComponentSet;

use super::simplex::{LinearProgram, Sense, SimplexError, TAU};
use super::LpError;

/// A variable: one full component, by (current) terminal set.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelComponent {
    /// Sorted current terminal ids.
    pub terminals: Vec<usize>,
    pub cost: f64,
    /// Index into the originating component set.
    pub origin: usize,
}

/// A pooled constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cut {
    /// `y_r >= 1`.
    Coverage(usize),
    /// `sum (|R' ∩ R_C| - 1)^+ x_C <= |R'| - 1` for the sorted set `R'`.
    Subtour(Vec<usize>),
    /// `sum x_C <= 1` over pairwise-conflicting components, by sorted
    /// terminal sets.
    Clique(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, Default)]
pub struct SerModel {
    /// Sorted current terminal ids.
    pub terminals: Vec<usize>,
    pub components: Vec<ModelComponent>,
    pool: BTreeSet<Cut>,
    /// Optional upper bound on the objective.
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    /// Coverage `y_r` per model terminal, in terminal order.
    pub coverage: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    /// Indices of components with value above the support threshold.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] > TAU).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|&v| v <= TAU || v >= 1.0 - TAU)
    }
}

impl SerModel {
    /// One variable per component of `set` over the terminals `terminals`.
    pub fn new(terminals: &[usize], set: &ComponentSet) -> Self {
        let mut terminals = terminals.to_vec();
        terminals.sort_unstable();
        terminals.dedup();
        let components = set
            .components()
            .iter()
            .enumerate()
            .map(|(origin, c)| ModelComponent {
                terminals: c.terminals.clone(),
                cost: c.cost,
                origin,
            })
            .collect();
        SerModel {
            terminals,
            components,
            pool: BTreeSet::new(),
            bound: None,
        }
    }

    pub fn pool(&self) -> impl Iterator<Item = &Cut> {
        self.pool.iter()
    }

    pub fn pool_len(&self) -> usize {
        self.pool.len()
    }

    /// Adds `cut` if it is new; returns whether it was added.
    pub fn add_cut(&mut self, cut: Cut) -> bool {
        self.pool.insert(cut)
    }

    /// Coefficients of `cut` over the variables, with its right-hand side.
    pub fn cut_row(&self, cut: &Cut) -> (Vec<(usize, f64)>, Sense, f64) {
        match cut {
            Cut::Coverage(r) => (
                self.components
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.terminals.binary_search(r).is_ok())
                    .map(|(i, _)| (i, 1.0))
                    .collect(),
                Sense::Ge,
                1.0,
            ),
            Cut::Subtour(set) => (
                self.components
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| {
                        let shared = c.terminals.iter().filter(|t| set.binary_search(t).is_ok()).count();
                        (shared >= 2).then(|| (i, (shared - 1) as f64))
                    })
                    .collect(),
                Sense::Le,
                (set.len() - 1) as f64,
            ),
            Cut::Clique(members) => (
                self.components
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| members.binary_search(&c.terminals).is_ok())
                    .map(|(i, _)| (i, 1.0))
                    .collect(),
                Sense::Le,
                1.0,
            ),
        }
    }

    /// Left-hand side minus right-hand side of `cut` at `x`, oriented so
    /// that positive means violated.
    pub fn violation(&self, cut: &Cut, x: &[f64]) -> f64 {
        let (coeffs, sense, rhs) = self.cut_row(cut);
        let lhs: f64 = coeffs.iter().map(|&(i, a)| a * x[i]).sum();
        match sense {
            Sense::Le => lhs - rhs,
            Sense::Ge => rhs - lhs,
            Sense::Eq => (lhs - rhs).abs(),
        }
    }

    pub fn to_program(&self) -> LinearProgram {
        let n = self.components.len();
        let mut lp = LinearProgram::new(self.components.iter().map(|c| c.cost).collect(), vec![1.0; n]);
        lp.add_row(
            self.components
                .iter()
                .enumerate()
                .map(|(i, c)| (i, (c.terminals.len() - 1) as f64))
                .collect(),
            Sense::Eq,
            (self.terminals.len() - 1) as f64,
        );
        for cut in &self.pool {
            let (coeffs, sense, rhs) = self.cut_row(cut);
            lp.add_row(coeffs, sense, rhs);
        }
        if let Some(b) = self.bound {
            lp.add_row(
                self.components.iter().enumerate().map(|(i, c)| (i, c.cost)).collect(),
                Sense::Le,
                b,
            );
        }
        lp
    }

    /// Solves the current pool exactly.
    pub fn solve(&self) -> Result<LpSolution, LpError> {
        if self.components.is_empty() {
            return Err(LpError::EmptyModel);
        }
        let sol = self.to_program().solve().map_err(|e| match e {
            SimplexError::Infeasible => LpError::Infeasible,
            other => LpError::Simplex(other),
        })?;
        let coverage = self.coverage(&sol.x);
        Ok(LpSolution {
            values: sol.x,
            objective: sol.objective,
            coverage,
            iterations: sol.iterations,
        })
    }

    pub fn coverage(&self, x: &[f64]) -> Vec<f64> {
        let pos: HashMap<usize, usize> = self.terminals.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut y = vec![0.0; self.terminals.len()];
        for (c, &v) in self.components.iter().zip(x) {
            for t in &c.terminals {
                y[pos[t]] += v;
            }
        }
        y
    }

    /// Removes `deleted` terminals together with every component and cut
    /// that mentions them.
    pub fn delete_terminals(&mut self, deleted: &[usize]) -> Vec<usize> {
        let gone = |t: &usize| deleted.contains(t);
        self.terminals.retain(|t| !gone(t));
        let mut kept = Vec::new();
        let mut comps = Vec::new();
        for (i, c) in self.components.drain(..).enumerate() {
            if !c.terminals.iter().any(gone) {
                kept.push(i);
                comps.push(c);
            }
        }
        self.components = comps;
        self.pool.retain(|cut| match cut {
            Cut::Coverage(r) => !gone(r),
            Cut::Subtour(set) => !set.iter().any(gone),
            Cut::Clique(members) => !members.iter().flatten().any(gone),
        });
        kept
    }

    /// Merges `members` into the single terminal `members.min()`. Terminal
    /// sets of components and subtour cuts are remapped; components left
    /// with fewer than two terminals are dropped, duplicates keep the
    /// cheapest, and clique cuts are discarded.
    pub fn contract(&mut self, members: &[usize]) {
        let Some(&rep) = members.iter().min() else { return };
        let map = |t: usize| if members.contains(&t) { rep } else { t };
        let remap = |ts: &[usize]| -> Vec<usize> {
            let mut out: Vec<usize> = ts.iter().map(|&t| map(t)).collect();
            out.sort_unstable();
            out.dedup();
            out
        };
        self.terminals = remap(&self.terminals);
        let mut best: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut comps: Vec<ModelComponent> = Vec::new();
        for c in self.components.drain(..) {
            let ts = remap(&c.terminals);
            if ts.len() < 2 {
                continue;
            }
            match best.get(&ts) {
                Some(&i) => {
                    if c.cost < comps[i].cost {
                        comps[i] = ModelComponent { terminals: ts, ..c };
                    }
                }
                None => {
                    best.insert(ts.clone(), comps.len());
                    comps.push(ModelComponent { terminals: ts, ..c });
                }
            }
        }
        self.components = comps;
        let old = std::mem::take(&mut self.pool);
        for cut in old {
            match cut {
                Cut::Coverage(r) => {
                    self.pool.insert(Cut::Coverage(map(r)));
                }
                Cut::Subtour(set) => {
                    let set = remap(&set);
                    if set.len() >= 2 {
                        self.pool.insert(Cut::Subtour(set));
                    }
                }
                Cut::Clique(_) => {}
            }
        }
    }

    /// Plain-text dump of the pool and, if given, a solution.
    pub fn dump(&self, sol: Option<&LpSolution>) -> String {
        let mut out = String::new();
        let ts: Vec<String> = self.terminals.iter().map(|t| (t + 1).to_string()).collect();
        let _ = writeln!(out, "terminals {}", ts.join(","));
        for (i, c) in self.components.iter().enumerate() {
            let ts: Vec<String> = c.terminals.iter().map(|t| (t + 1).to_string()).collect();
            let _ = write!(out, "var {i} terminals={} cost={}", ts.join(","), c.cost);
            if let Some(s) = sol {
                let _ = write!(out, " x={}", s.values[i]);
            }
            out.push('\n');
        }
        if let Some(b) = self.bound {
            let _ = writeln!(out, "bound {b}");
        }
        for cut in &self.pool {
            let fmt = |ts: &[usize]| ts.iter().map(|t| (t + 1).to_string()).collect::<Vec<_>>().join(",");
            let _ = match cut {
                Cut::Coverage(r) => writeln!(out, "coverage {}", r + 1),
                Cut::Subtour(set) => writeln!(out, "subtour {}", fmt(set)),
                Cut::Clique(members) => {
                    let parts: Vec<String> = members.iter().map(|m| fmt(m)).collect();
                    writeln!(out, "clique {}", parts.join(" "))
                }
            };
        }
        if let Some(s) = sol {
            let _ = writeln!(out, "objective {}", s.objective);
        }
        out
    }
}
