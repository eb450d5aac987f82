mod common;

use common::*;
use proptest::prelude::*;
use steiner_core::budget::Deadline;
use steiner_core::components::{best_assemblable_cost, GenStrategy};
use steiner_core::exact::exact_cost;
use steiner_core::gcf::{run_gcf, ContractionState, GcfOptions, SaveKind, WinKind};
use steiner_core::generator::{random_instance, CostKind, GeneratorConfig};
use steiner_core::graph::{DistMode, DistanceOracle, Instance, PathPolicy};
use steiner_core::lp::{round_iterative, solve_ser, RoundOptions, SerModel, SerOptions};
use steiner_core::stp::{parse_stp, write_stp};
use steiner_core::two_approx::{kmb, mehlhorn, tm};

fn instance() -> impl Strategy<Value = Instance> {
    (4usize..11, 2usize..7, 0usize..14, any::<u64>(), any::<bool>()).prop_map(|(n, t, extra, seed, real)| {
        let cfg = GeneratorConfig::new(n, t.min(n), extra);
        let cfg = if real { cfg.with_costs(CostKind::Real { low: 0.5, high: 4.0 }) } else { cfg };
        random_instance(&cfg, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heuristics_are_valid_and_within_two(inst in instance()) {
        let opt = brute_force_steiner(&inst);
        let oracle = DistanceOracle::build(&inst, DistMode::Apsp, PathPolicy::Prefer);
        for t in [tm(&inst), kmb(&inst, &oracle), mehlhorn(&inst)] {
            prop_assert!(t.validate(&inst, inst.terminals()).is_ok());
            prop_assert!(t.cost >= opt - 1e-9);
            prop_assert!(t.cost <= 2.0 * opt + 1e-9);
        }
        prop_assert!((exact_cost(&inst).unwrap() - opt).abs() < 1e-9);
    }

    #[test]
    fn stp_round_trip(inst in instance()) {
        let text = write_stp(&inst);
        let back = parse_stp(&text).unwrap();
        prop_assert_eq!(back.edges(), inst.edges());
        prop_assert_eq!(back.terminals(), inst.terminals());
        prop_assert_eq!(back.name(), inst.name());
    }

    #[test]
    fn greedy_trees_are_valid_and_improve_the_mst(inst in instance(), win in 0usize..3) {
        let set = components(&inst, GenStrategy::Voronoi, 3);
        let opts = match win {
            0 => GcfOptions { win: WinKind::Abs, ..Default::default() },
            1 => GcfOptions::default(),
            _ => GcfOptions::lca(),
        };
        let r = run_gcf(&inst, &set, &opts, &Deadline::none()).unwrap();
        prop_assert!(r.tree.validate(&inst, inst.terminals()).is_ok());
        prop_assert!(r.final_mst <= r.initial_mst + 1e-9);
        prop_assert!(r.tree.cost <= r.initial_mst + 1e-9);
        let mut prev = r.initial_mst;
        for s in &r.steps {
            prop_assert!(s.mst_after <= prev + 1e-9);
            prop_assert!(s.cost < s.save);
            prev = s.mst_after;
        }
    }

    #[test]
    fn relaxation_is_a_bound_without_violated_subtours(inst in instance()) {
        let set = components(&inst, GenStrategy::Dw, 3);
        let mut model = SerModel::new(inst.terminals(), &set);
        let (sol, _) = solve_ser(&mut model, &SerOptions::default(), &Deadline::none()).unwrap();
        let best = best_assemblable_cost(set.components(), inst.terminals()).unwrap().0;
        prop_assert!(sol.objective <= best + 1e-6);
        let comps: Vec<(Vec<usize>, f64)> =
            model.components.iter().map(|c| c.terminals.clone()).zip(sol.values.iter().copied()).collect();
        prop_assert!(max_subtour_violation(&model.terminals, &comps).0 <= 1e-6);
        let r = round_iterative(&inst, &set, &RoundOptions::default(), &Deadline::none()).unwrap();
        prop_assert!(r.tree.validate(&inst, inst.terminals()).is_ok());
        prop_assert!((r.lp_bound - sol.objective).abs() < 1e-6);
    }

    #[test]
    fn save_matches_definition(
        weights in proptest::collection::vec(1u32..30, 2..10),
        parents in proptest::collection::vec(any::<prop::sample::Index>(), 10),
        pick in proptest::collection::vec(any::<prop::sample::Index>(), 2..5),
    ) {
        let n = weights.len() + 1;
        let tree: Vec<(usize, usize, f64)> =
            (1..n).map(|v| (parents[v - 1].index(v), v, weights[v - 1] as f64)).collect();
        let mut members: Vec<usize> = pick.iter().map(|i| i.index(n)).collect();
        members.sort_unstable();
        members.dedup();
        prop_assume!(members.len() >= 2);
        let expected = definitional_save(n, &tree, &members);
        for kind in [SaveKind::Matrix, SaveKind::Static, SaveKind::Dynamic] {
            let state = ContractionState::from_tree(n, &tree, kind);
            prop_assert_eq!(state.save(&members), expected);
        }
    }
}
