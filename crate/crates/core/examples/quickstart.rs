//! Parse a small STP instance and compare the classic heuristics with the
//! exact optimum.

use steiner_core::exact::exact_cost;
use steiner_core::graph::{DistMode, DistanceOracle, PathPolicy};
use steiner_core::stp::parse_stp;
use steiner_core::two_approx::{kmb, mehlhorn, tm};

const STAR: &str = "33D32945 STP File, STP Format Version 1.0
SECTION Comment
Name \"star\"
END
SECTION Graph
Nodes 4
Edges 5
E 1 2 1
E 1 3 1
E 1 4 1
E 2 3 1.9
E 3 4 1.9
END
SECTION Terminals
Terminals 3
T 2
T 3
T 4
END
EOF
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = parse_stp(STAR)?;
    let oracle = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Prefer);
    println!("instance {} with {} nodes, {} terminals", inst.name().unwrap_or("?"), inst.node_count(), inst.terminals().len());
    for (name, tree) in [("tm", tm(&inst)), ("kmb", kmb(&inst, &oracle)), ("mehlhorn", mehlhorn(&inst))] {
        tree.validate(&inst, inst.terminals())?;
        println!("{name:>9}: cost {} using edges {:?}", tree.cost, tree.edges);
    }
    println!("{:>9}: cost {}", "optimum", exact_cost(&inst)?);
    Ok(())
}
