//! Integral-leaf pruning and iterative sample-and-contract rounding.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::budget::Deadline;
use crate::components::ComponentSet;
use crate::graph::Instance;
use crate::two_approx::{prune_to_steiner_tree, SteinerTree};

use super::model::{LpSolution, SerModel};
use super::simplex::TAU;
use super::{solve_ser, LpError, SerOptions, SerStats};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PruneOutcome {
    /// Origins of committed components, in commit order.
    pub committed: Vec<usize>,
    /// Terminals removed from the model.
    pub removed: Vec<usize>,
}

/// Repeatedly commits a support component with value ~1 that shares
/// exactly one terminal with the rest of the support, removes its other
/// terminals from the model and drops its variable. Candidates are taken
/// in component-index order. `sol` is restricted to the reduced model.
pub fn prune_integral_leaves(model: &mut SerModel, sol: &mut LpSolution) -> PruneOutcome {
    let mut out = PruneOutcome::default();
    while model.terminals.len() > 1 {
        let support = sol.support();
        let mut found: Option<(usize, Vec<usize>)> = None;
        for &i in &support {
            if sol.values[i] < 1.0 - TAU {
                continue;
            }
            let ts = &model.components[i].terminals;
            let shared: Vec<usize> = ts
                .iter()
                .copied()
                .filter(|t| {
                    support
                        .iter()
                        .any(|&j| j != i && model.components[j].terminals.binary_search(t).is_ok())
                })
                .collect();
            if shared.len() == 1 {
                found = Some((i, ts.iter().copied().filter(|&t| t != shared[0]).collect()));
                break;
            }
            if support.len() == 1 && ts.len() == model.terminals.len() {
                found = Some((i, ts[1..].to_vec()));
                break;
            }
        }
        let Some((i, removed)) = found else { break };
        out.committed.push(model.components[i].origin);
        let kept = model.delete_terminals(&removed);
        sol.values = kept.iter().map(|&j| sol.values[j]).collect();
        sol.objective = sol
            .values
            .iter()
            .zip(&model.components)
            .map(|(x, c)| x * c.cost)
            .sum();
        sol.coverage = model.coverage(&sol.values);
        out.removed.extend(removed);
    }
    out
}

/// How the component to commit is chosen each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// With probability proportional to its LP value.
    Sample(u64),
    /// The largest LP value; ties by lower cost, then lower index.
    MaxValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundOptions {
    pub ser: SerOptions,
    pub rounding: Rounding,
    pub prune: bool,
}

impl Default for RoundOptions {
    fn default() -> Self {
        RoundOptions {
            ser: SerOptions::default(),
            rounding: Rounding::MaxValue,
            prune: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundResult {
    pub tree: SteinerTree,
    /// Objective of the first relaxation, a lower bound for trees made of
    /// components of the set.
    pub lp_bound: f64,
    /// Origins of all committed components.
    pub committed: Vec<usize>,
    pub solves: usize,
    pub stats: SerStats,
}

fn add_stats(total: &mut SerStats, s: SerStats) {
    total.rounds += s.rounds;
    total.coverage_cuts += s.coverage_cuts;
    total.subtour_cuts += s.subtour_cuts;
    total.clique_cuts += s.clique_cuts;
    total.simplex_iterations += s.simplex_iterations;
}

/// Solve, prune integral leaves, commit one support component, contract
/// its terminals into one, and repeat until a single terminal remains.
/// The tree is the union of the committed components, cleaned by MST and
/// leaf pruning.
pub fn round_iterative(
    inst: &Instance,
    set: &ComponentSet,
    opts: &RoundOptions,
    deadline: &Deadline,
) -> Result<RoundResult, LpError> {
    let mut model = SerModel::new(inst.terminals(), set);
    let mut rng = match opts.rounding {
        Rounding::Sample(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Rounding::MaxValue => None,
    };
    let mut committed = Vec::new();
    let mut lp_bound = None;
    let mut solves = 0;
    let mut stats = SerStats::default();
    while model.terminals.len() > 1 {
        let mut ser = opts.ser;
        if lp_bound.is_some() {
            ser.bound = None;
        }
        let solved = solve_ser(&mut model, &ser, deadline);
        let (mut sol, s) = match (solved, lp_bound.is_some()) {
            (Ok(v), _) => v,
            (Err(LpError::Interrupted(i)), _) => return Err(LpError::Interrupted(i)),
            (Err(e), false) => return Err(e),
            (Err(e), true) => return Err(LpError::Residual(Box::new(e))),
        };
        solves += 1;
        add_stats(&mut stats, s);
        lp_bound.get_or_insert(sol.objective);

        if opts.prune {
            committed.extend(prune_integral_leaves(&mut model, &mut sol).committed);
            if model.terminals.len() <= 1 {
                break;
            }
        }
        let support = sol.support();
        if support.is_empty() {
            return Err(LpError::Residual(Box::new(LpError::EmptyModel)));
        }
        let pick = match rng.as_mut() {
            Some(rng) => {
                let weights: Vec<f64> = support.iter().map(|&i| sol.values[i]).collect();
                let dist = WeightedIndex::new(&weights).expect("support values are positive");
                support[dist.sample(rng)]
            }
            None => *support
                .iter()
                .max_by(|&&a, &&b| {
                    sol.values[a]
                        .total_cmp(&sol.values[b])
                        .then(model.components[b].cost.total_cmp(&model.components[a].cost))
                        .then(b.cmp(&a))
                })
                .unwrap(),
        };
        let comp = model.components[pick].clone();
        log::debug!("commit {:?} x={} cost={}", comp.terminals, sol.values[pick], comp.cost);
        committed.push(comp.origin);
        model.contract(&comp.terminals);
    }
    let edges: Vec<usize> = committed.iter().flat_map(|&o| set.components()[o].expand()).collect();
    let tree = prune_to_steiner_tree(inst, &edges, inst.terminals())
        .map_err(|_| LpError::Residual(Box::new(LpError::Infeasible)))?;
    Ok(RoundResult {
        tree,
        lp_bound: lp_bound.unwrap_or(0.0),
        committed,
        solves,
        stats,
    })
}
