mod common;

use common::*;
use paritydfi::dfi::{self, onestep, PassSemantics, SolverOptions};
use paritydfi::fixpoint::{
    bfl_win0, bfl_win0_traced, onestep_sets, Environment, PriorityPartition, VertexSet,
    DEFAULT_BUDGET,
};
use paritydfi::verify::verify;
use paritydfi::zielonka::solve_zielonka;
use paritydfi::{sort_by_priority, ParityGame, Player};
use proptest::prelude::*;

fn regions(game: &ParityGame) -> [Vec<Player>; 4] {
    [
        basic_regions(game),
        dfi_solution(game, &freezing()).winner,
        dfi_solution(game, &in_place()).winner,
        solve_zielonka(game).unwrap().winner,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn all_solvers_agree_and_strategies_verify(g in games(40, 6, 0.1)) {
        let [basic, snapshot, in_place_w, zlk] = regions(&g);
        prop_assert_eq!(&basic, &zlk);
        prop_assert_eq!(&snapshot, &zlk);
        prop_assert_eq!(&in_place_w, &zlk);
        for sol in [dfi_solution(&g, &freezing()), dfi_solution(&g, &in_place()), solve_zielonka(&g).unwrap()] {
            let report = verify(&g, &sol);
            prop_assert!(report.ok, "{:?}", report.violations);
        }
    }

    #[test]
    fn onestep_matches_set_semantics(g in games(30, 6, 0.2), bits in prop::collection::vec(any::<bool>(), 30)) {
        let n = g.vertex_count();
        let z = VertexSet::from_fn(n, |v| bits[v]);
        let flags: dfi::Flags = (0..n).map(|v| bits[v]).collect();
        let sets = onestep_sets(&z, &g);
        prop_assert!(sets.even.intersection(&sets.odd).is_empty());
        prop_assert_eq!(sets.even.union(&sets.odd), VertexSet::full(n));
        for v in g.vertices() {
            let (winner, choice) = onestep(&g, &flags, v);
            prop_assert_eq!(sets.even.contains(v), winner == Player::Even);
            if let Some(u) = choice {
                prop_assert!(g.has_edge(v, u) && g.owner(v) == winner);
                prop_assert_eq!(dfi::winner_of(&g, &flags, u), winner);
            }
            let mismatched = winner != Player::of_priority(g.priority(v));
            prop_assert_eq!(sets.distraction.contains(v), mismatched);
        }
    }

    #[test]
    fn freezing_discipline_holds(g in games(40, 6, 0.1)) {
        for semantics in [PassSemantics::Snapshot, PassSemantics::InPlace] {
            let (violations, _) = freeze_violations(&g, semantics);
            prop_assert!(violations.is_empty(), "{:?}", violations);
        }
    }

    #[test]
    fn sorting_is_invisible(g in games(30, 6, 0.1)) {
        let direct = dfi_solution(&g, &freezing());
        let (sorted, perm) = sort_by_priority(&g);
        prop_assert!(sorted.is_priority_sorted());
        prop_assert_eq!(perm.restore(&sorted), g.clone());
        let via_sorted = dfi::solve(&sorted, &freezing()).unwrap().into_solution().unwrap();
        prop_assert_eq!(via_sorted.to_external(&perm), direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bfl_equals_basic_region(g in games(12, 4, 0.1)) {
        let win0 = bfl_win0(&g).unwrap();
        let basic = basic_regions(&g);
        for v in g.vertices() {
            prop_assert_eq!(win0.contains(v), basic[v] == Player::Even);
        }
    }

    #[test]
    fn fixpoint_iterates_are_monotone(g in games(10, 4, 0.1)) {
        let n = g.vertex_count();
        let mut bad = Vec::new();
        bfl_win0_traced(&g, DEFAULT_BUDGET, |it| {
            let monotone = if it.least {
                it.before.is_subset(it.after)
            } else {
                it.after.is_subset(it.before)
            };
            if !monotone || it.round > n + 1 {
                bad.push((it.level, it.round));
            }
        }).unwrap();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn de_morgan_over_priority_partition(
        g in games(20, 6, 0.1),
        bits in prop::collection::vec(prop::collection::vec(any::<bool>(), 20), 7),
    ) {
        let n = g.vertex_count();
        let partition = PriorityPartition::of(&g);
        let mut env = Environment::new();
        for p in partition.priorities() {
            env.bind(p, VertexSet::from_fn(n, |v| bits[p as usize][v]));
        }
        prop_assert_eq!(partition.select_any(&env, n), partition.select_all(&env, n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn workers_do_not_change_the_result(n in 1usize..12_000, d in 0u32..4, seed: u64) {
        let g = paritydfi::generate::random_game(
            &paritydfi::generate::GenParams::new(n, d, seed).outdegree(1, n.min(3)),
        ).unwrap();
        let reference = dfi::solve_game(&g, &freezing()).unwrap();
        for workers in [2, 4, 8] {
            let run = dfi::solve_game(&g, &SolverOptions::default().with_workers(workers)).unwrap();
            prop_assert_eq!(&run.winner, &reference.winner);
            prop_assert_eq!(&run.strategy, &reference.strategy);
            prop_assert_eq!(&run.distractions, &reference.distractions);
            prop_assert_eq!(run.stats.passes, reference.stats.passes);
        }
    }
}

#[test]
fn basic_and_freezing_final_flags_give_same_regions_on_fixtures() {
    for g in [paritydfi::fixtures::g1(), paritydfi::fixtures::g2()] {
        let [basic, snapshot, in_place_w, zlk] = regions(&g);
        assert_eq!(basic, zlk);
        assert_eq!(snapshot, zlk);
        assert_eq!(in_place_w, zlk);
    }
}
