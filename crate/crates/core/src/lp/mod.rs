//! Hypergraphic subtour relaxation over k-restricted full components,
//! solved by cutting planes, with iterative sample-and-contract rounding.

mod model;
mod round;
mod separate;
pub mod simplex;

use thiserror::Error;

use crate::budget::{Deadline, Interrupted};

pub use model::{Cut, LpSolution, ModelComponent, SerModel};
pub use round::{prune_integral_leaves, round_iterative, PruneOutcome, RoundOptions, RoundResult, Rounding};
pub use separate::{separate, separate_cliques, support_classes, SeparationNetwork};
pub use simplex::{LinearProgram, Sense, SimplexError, TAU};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("relaxation is infeasible")]
    Infeasible,
    #[error("model has no variables")]
    EmptyModel,
    #[error(transparent)]
    Simplex(SimplexError),
    #[error("terminal {terminal} has coverage {coverage} < 1; add coverage rows before separating")]
    CoverageBelowOne { terminal: usize, coverage: f64 },
    #[error("cutting-plane loop stalled after {0} rounds")]
    Stalled(usize),
    #[error("rounding left an infeasible residual model: {0}")]
    Residual(Box<LpError>),
    #[error(transparent)]
    Interrupted(#[from] Interrupted),
}

/// When coverage rows enter the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Presep {
    /// All coverage rows are present from the start.
    Initial,
    /// Coverage rows are added when violated.
    OnDemand,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerOptions {
    pub presep: Presep,
    pub consep: bool,
    pub stronger: bool,
    /// Objective upper bound (a known tree cost), if any.
    pub bound: Option<f64>,
    /// Largest clique searched by the stronger separation; `k + 1` is usual.
    pub clique_size: usize,
    pub max_rounds: usize,
}

impl Default for SerOptions {
    fn default() -> Self {
        SerOptions {
            presep: Presep::Initial,
            consep: true,
            stronger: false,
            bound: None,
            clique_size: 4,
            max_rounds: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SerStats {
    pub rounds: usize,
    pub coverage_cuts: usize,
    pub subtour_cuts: usize,
    pub clique_cuts: usize,
    pub simplex_iterations: usize,
}

/// Cutting-plane loop on `model`: solve, add violated coverage rows, then
/// violated subtour (and with `stronger`, clique) constraints, until none
/// are violated. Cuts accumulate in the model's pool.
pub fn solve_ser(model: &mut SerModel, opts: &SerOptions, deadline: &Deadline) -> Result<(LpSolution, SerStats), LpError> {
    let mut stats = SerStats::default();
    model.bound = opts.bound;
    if opts.presep == Presep::Initial {
        for &t in &model.terminals.clone() {
            if model.add_cut(Cut::Coverage(t)) {
                stats.coverage_cuts += 1;
            }
        }
    }
    loop {
        deadline.check()?;
        if stats.rounds >= opts.max_rounds {
            return Err(LpError::Stalled(stats.rounds));
        }
        stats.rounds += 1;
        let sol = model.solve()?;
        stats.simplex_iterations += sol.iterations;

        let uncovered: Vec<usize> = (0..model.terminals.len())
            .filter(|&i| sol.coverage[i] < 1.0 - TAU)
            .map(|i| model.terminals[i])
            .collect();
        if !uncovered.is_empty() {
            let mut added = false;
            for t in uncovered {
                if model.add_cut(Cut::Coverage(t)) {
                    stats.coverage_cuts += 1;
                    added = true;
                }
            }
            if !added {
                return Err(LpError::Stalled(stats.rounds));
            }
            continue;
        }

        let mut cuts = separate(model, &sol, opts.consep)?;
        if opts.stronger {
            cuts.extend(separate_cliques(model, &sol, opts.clique_size));
        }
        let mut added = false;
        for cut in cuts {
            let is_clique = matches!(cut, Cut::Clique(_));
            if model.add_cut(cut) {
                added = true;
                if is_clique {
                    stats.clique_cuts += 1;
                } else {
                    stats.subtour_cuts += 1;
                }
            }
        }
        log::debug!(
            "lp round {} objective {} pool {}",
            stats.rounds,
            sol.objective,
            model.pool_len()
        );
        if !added {
            return Ok((sol, stats));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::{generate, GenStrategy};
    use crate::graph::{DistMode, DistanceOracle, Instance, PathPolicy};

    fn components(inst: &Instance, k: usize) -> crate::components::ComponentSet {
        let oracle = DistanceOracle::build(inst, DistMode::Apsp, PathPolicy::Prefer);
        generate(inst, &oracle, GenStrategy::Dw, k, &Deadline::none()).unwrap()
    }

    /// Four terminals on spokes of cost 1 around a zero-cost 4-cycle.
    fn cycle4() -> Instance {
        let mut edges: Vec<(usize, usize, f64)> = (0..4).map(|i| (i, 4 + i, 1.0)).collect();
        edges.extend((0..4).map(|i| (4 + i, 4 + (i + 1) % 4, 0.0)));
        Instance::new(8, edges, 0..4).unwrap()
    }

    #[test]
    fn star_relaxation_is_integral() {
        let inst = Instance::new(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.9), (2, 3, 1.9)], [1, 2, 3]).unwrap();
        let set = components(&inst, 3);
        let mut model = SerModel::new(inst.terminals(), &set);
        let (sol, _) = solve_ser(&mut model, &SerOptions::default(), &Deadline::none()).unwrap();
        assert!((sol.objective - 3.0).abs() < 1e-9);
        assert!(sol.is_integral());
    }

    #[test]
    fn cycle_relaxation_and_clique_strengthening() {
        let inst = cycle4();
        let set = components(&inst, 3);
        let mut model = SerModel::new(inst.terminals(), &set);
        let (sol, _) = solve_ser(&mut model, &SerOptions::default(), &Deadline::none()).unwrap();
        assert!((sol.objective - 4.5).abs() < 1e-6, "{}", sol.objective);
        let mut model = SerModel::new(inst.terminals(), &set);
        let opts = SerOptions {
            stronger: true,
            ..Default::default()
        };
        let (sol, stats) = solve_ser(&mut model, &opts, &Deadline::none()).unwrap();
        assert!(stats.clique_cuts > 0);
        assert!((sol.objective - 5.0).abs() < 1e-6, "{}", sol.objective);
    }

    #[test]
    fn parallel_pair_components_violate_a_subtour() {
        // Terminals 0..4; components {0,1} twice (as distinct variables) and {2,3}.
        let mut model = SerModel::default();
        model.terminals = vec![0, 1, 2, 3];
        for (ts, origin) in [(vec![0, 1], 0), (vec![0, 1], 1), (vec![2, 3], 2)] {
            model.components.push(ModelComponent { terminals: ts, cost: 1.0, origin });
        }
        let sol = LpSolution {
            values: vec![1.0, 1.0, 1.0],
            objective: 3.0,
            coverage: model.coverage(&[1.0, 1.0, 1.0]),
            iterations: 0,
        };
        let cuts = separate(&model, &sol, false).unwrap();
        assert!(cuts.contains(&Cut::Subtour(vec![0, 1])), "{cuts:?}");
    }
}
