mod common;

use std::path::Path;

use common::*;
use steiner_core::budget::Deadline;
use steiner_core::components::{best_assemblable_cost, GenStrategy};
use steiner_core::exact::exact_cost;
use steiner_core::graph::{Instance, VoronoiPartition};
use steiner_core::lp::{prune_integral_leaves, round_iterative, solve_ser, RoundOptions, SerModel, SerOptions};
use steiner_core::stp::{read_stp_file, BoundsTable};

fn fixture(name: &str) -> Instance {
    read_stp_file(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixtures").join(format!("{name}.stp"))).unwrap()
}

/// Nonterminal 5 lies in the region of terminal 0 and 6 in that of 1.
fn voronoi_k4(eps: f64) -> Instance {
    let edges = [
        (0, 5, 2.0),
        (1, 6, 1.0),
        (5, 6, 1.0 + eps),
        (6, 4, 1.0 + eps),
        (5, 2, 2.0 + eps),
        (5, 3, 2.0 + eps),
        (0, 1, 1.0),
    ];
    Instance::new(7, edges, 0..5).unwrap()
}

#[test]
fn bundled_optima_match_the_bounds_file() {
    let bounds = BoundsTable::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/bounds/fixtures.txt")).unwrap();
    for name in ["path3", "star", "cycle4"] {
        let inst = fixture(name);
        assert_eq!(exact_cost(&inst).unwrap(), brute_force_steiner(&inst));
        assert_eq!(bounds.get(name), Some(brute_force_steiner(&inst)), "{name}");
    }
}

#[test]
fn voronoi_restriction_loses_for_k4() {
    for eps in [0.05, 0.1, 0.25, 0.5, 0.9] {
        let inst = voronoi_k4(eps);
        let vor = VoronoiPartition::compute(&inst);
        assert_eq!((vor.owner(5), vor.owner(6)), (0, 1));
        let best = |s| best_assemblable_cost(components(&inst, s, 4).components(), inst.terminals()).unwrap().0;
        assert!((best(GenStrategy::Naive) - (8.0 + 4.0 * eps)).abs() < 1e-9);
        assert!((best(GenStrategy::Dw) - (8.0 + 4.0 * eps)).abs() < 1e-9);
        assert!((best(GenStrategy::Voronoi) - (9.0 + 3.0 * eps)).abs() < 1e-9);
    }
    let file = fixture("voronoi-k4");
    assert_eq!(file.edges(), voronoi_k4(0.25).edges());
}

#[test]
fn integral_star_is_peeled_completely() {
    let inst = fixture("star");
    let set = components(&inst, GenStrategy::Dw, 3);
    let mut model = SerModel::new(inst.terminals(), &set);
    let (mut sol, _) = solve_ser(&mut model, &SerOptions::default(), &Deadline::none()).unwrap();
    assert!(sol.is_integral());
    let out = prune_integral_leaves(&mut model, &mut sol);
    assert_eq!(model.terminals.len(), 1);
    assert_eq!(out.committed.len(), 1);
    assert_eq!(set.components()[out.committed[0]].terminals, inst.terminals());

    let r = round_iterative(&inst, &set, &RoundOptions::default(), &Deadline::none()).unwrap();
    assert_eq!(r.tree.cost, 3.0);
    assert_eq!(r.lp_bound, 3.0);
}

#[test]
fn fractional_cycle_rounds_to_a_tree() {
    let inst = cycle4();
    let set = components(&inst, GenStrategy::Dw, 3);
    let r = round_iterative(&inst, &set, &RoundOptions::default(), &Deadline::none()).unwrap();
    assert!((r.lp_bound - 4.5).abs() < 1e-6);
    r.tree.validate(&inst, inst.terminals()).unwrap();
    let hyper: f64 = r.committed.iter().map(|&o| set.components()[o].cost).sum();
    assert!(hyper >= r.lp_bound - 1e-6);
    assert!(r.solves >= 2);
}
