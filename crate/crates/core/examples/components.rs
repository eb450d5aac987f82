//! Generate k-restricted full components with each strategy and report the
//! best tree that can be assembled from them.

use steiner_core::budget::Deadline;
use steiner_core::components::{best_assemblable_cost, generate, GenStrategy};
use steiner_core::generator::{random_instance, GeneratorConfig};
use steiner_core::graph::{DistMode, DistanceOracle, PathPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = random_instance(&GeneratorConfig::new(14, 6, 16), 42);
    let oracle = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Prefer);
    println!(
        "{}: {:.0}% of terminal pairs have valid paths, {} invalid",
        inst.name().unwrap(),
        100.0 * oracle.valid_terminal_pair_fraction(&inst),
        oracle.invalid_terminal_pairs(&inst)
    );
    for k in [3, 4] {
        for strategy in [GenStrategy::Naive, GenStrategy::Smart, GenStrategy::Dw, GenStrategy::Voronoi] {
            let set = generate(&inst, &oracle, strategy, k, &Deadline::none())?;
            let best = best_assemblable_cost(set.components(), inst.terminals()).map(|(c, _)| c);
            println!("k={k} {:>8}: {:>3} components, best assemblable {:?}", strategy.name(), set.len(), best);
        }
    }
    Ok(())
}
