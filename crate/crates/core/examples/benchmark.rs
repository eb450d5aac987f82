//! Run two configurations over generated instances and print the report.

use std::collections::HashMap;

use steiner_core::bench::{build_report, run_batch, Algorithm, InstanceInfo, ReportInputs, RunSpec};
use steiner_core::exact::exact_cost;
use steiner_core::generator::{random_instance, GeneratorConfig};
use steiner_core::gcf::WinKind;
use steiner_core::stp::{write_stp, BoundsTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("steiner-benchmark-example");
    std::fs::create_dir_all(&dir)?;
    let mut bounds = BoundsTable::default();
    let mut info = HashMap::new();
    let mut files = Vec::new();
    for seed in 0..6 {
        let inst = random_instance(&GeneratorConfig::new(30, 6 + seed as usize, 40), seed);
        let name = inst.name().unwrap().to_string();
        bounds.insert(&name, exact_cost(&inst)?);
        info.insert(name.clone(), InstanceInfo::of(&inst));
        let path = dir.join(format!("{name}.stp"));
        std::fs::write(&path, write_stp(&inst))?;
        files.push(path);
    }
    let mut records = Vec::new();
    let mut gcf = RunSpec::new(Algorithm::Gcf);
    gcf.win = WinKind::Abs;
    for spec in [RunSpec::new(Algorithm::Tm), gcf, RunSpec::new(Algorithm::Lca)] {
        records.extend(run_batch(&files, &spec, Some(&bounds), 2));
    }
    let tables = build_report(&ReportInputs {
        records: &records,
        bounds: Some(&bounds),
        info,
        ..Default::default()
    });
    for t in tables {
        println!("{}", t.to_markdown());
    }
    Ok(())
}
