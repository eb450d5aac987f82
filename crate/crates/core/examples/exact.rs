//! Dreyfus–Wagner on a generated instance, and the k-restricted ratio table.

use std::time::Instant;

use steiner_core::bench::rho_k;
use steiner_core::budget::Deadline;
use steiner_core::exact::{dreyfus_wagner, ExactOptions};
use steiner_core::generator::{random_instance, GeneratorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for terminals in [4, 8, 12] {
        let inst = random_instance(&GeneratorConfig::new(60, terminals, 90), 11);
        let start = Instant::now();
        let tree = dreyfus_wagner(&inst, &ExactOptions::default(), &Deadline::none())?;
        println!(
            "{}: optimum {} with {} edges in {:.3}s",
            inst.name().unwrap(),
            tree.cost,
            tree.edges.len(),
            start.elapsed().as_secs_f64()
        );
    }
    for k in 2..=8 {
        println!("rho_{k} = {:.4}", rho_k(k)?);
    }
    Ok(())
}
