//! Greedy contraction with the three win functions and loss contraction.

use steiner_core::budget::Deadline;
use steiner_core::components::{generate, GenStrategy};
use steiner_core::gcf::{run_gcf, run_gcf_ondemand, GcfOptions, SaveKind, WinKind};
use steiner_core::generator::{random_instance, GeneratorConfig};
use steiner_core::graph::{DistMode, DistanceOracle, PathPolicy};
use steiner_core::two_approx::tm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = random_instance(&GeneratorConfig::new(40, 12, 50), 7);
    let oracle = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Prefer);
    let set = generate(&inst, &oracle, GenStrategy::Voronoi, 3, &Deadline::none())?;
    println!("{}: tm cost {}, {} components", inst.name().unwrap(), tm(&inst).cost, set.len());

    let variants = [
        ("gcf abs", GcfOptions { win: WinKind::Abs, ..Default::default() }),
        ("gcf rel", GcfOptions::default()),
        ("gcf rel dynamic", GcfOptions { save: SaveKind::Dynamic, ..Default::default() }),
        ("gcf rel singlepass", GcfOptions { singlepass: true, ..Default::default() }),
        ("lca", GcfOptions::lca()),
    ];
    for (name, opts) in variants {
        let r = run_gcf(&inst, &set, &opts, &Deadline::none())?;
        println!(
            "{name:>18}: cost {:>5} after {:>2} contractions (mst {} -> {}, {} evaluations)",
            r.tree.cost,
            r.steps.len(),
            r.initial_mst,
            r.final_mst,
            r.evaluations
        );
    }
    let r = run_gcf_ondemand(&inst, &oracle, &GcfOptions { win: WinKind::Abs, ..Default::default() }, &Deadline::none())?;
    println!("{:>18}: cost {:>5} after {:>2} contractions", "gcf on-demand", r.tree.cost, r.steps.len());
    Ok(())
}
