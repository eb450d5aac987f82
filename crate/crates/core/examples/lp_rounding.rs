//! The hypergraphic subtour relaxation on the 4-cycle gap instance, and
//! iterative rounding on a random instance.

use steiner_core::budget::Deadline;
use steiner_core::components::{generate, GenStrategy};
use steiner_core::generator::{random_instance, GeneratorConfig};
use steiner_core::graph::{DistMode, DistanceOracle, Instance, PathPolicy};
use steiner_core::lp::{round_iterative, solve_ser, RoundOptions, Rounding, SerModel, SerOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut edges: Vec<(usize, usize, f64)> = (0..4).map(|i| (i, 4 + i, 1.0)).collect();
    edges.extend((0..4).map(|i| (4 + i, 4 + (i + 1) % 4, 0.0)));
    let cycle = Instance::new(8, edges, 0..4)?;
    let oracle = DistanceOracle::build(&cycle, DistMode::Apsp, PathPolicy::Prefer);
    let set = generate(&cycle, &oracle, GenStrategy::Dw, 3, &Deadline::none())?;
    for stronger in [false, true] {
        let mut model = SerModel::new(cycle.terminals(), &set);
        let opts = SerOptions { stronger, ..Default::default() };
        let (sol, stats) = solve_ser(&mut model, &opts, &Deadline::none())?;
        println!("cycle, stronger={stronger}: objective {:.4} after {} rounds, {stats:?}", sol.objective, stats.rounds);
        if !stronger {
            print!("{}", model.dump(Some(&sol)));
        }
    }

    let inst = random_instance(&GeneratorConfig::new(30, 8, 30), 3);
    let oracle = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Prefer);
    let set = generate(&inst, &oracle, GenStrategy::Dw, 3, &Deadline::none())?;
    for rounding in [Rounding::MaxValue, Rounding::Sample(1), Rounding::Sample(2)] {
        let r = round_iterative(&inst, &set, &RoundOptions { rounding, ..Default::default() }, &Deadline::none())?;
        println!(
            "{}: {rounding:?} -> tree cost {} (LP bound {:.3}, {} solves, {} committed)",
            inst.name().unwrap(),
            r.tree.cost,
            r.lp_bound,
            r.solves,
            r.committed.len()
        );
    }
    Ok(())
}
