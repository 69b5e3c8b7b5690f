mod common;

use common::*;
use paritydfi::generate::SplitMix64;
use paritydfi::verify::{confirm_witness, verify, Violation};
use paritydfi::zielonka::solve_zielonka;
use paritydfi::Player;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn flipped_winner_is_rejected(g in games(30, 6, 0.1), pick: u64) {
        let mut sol = solve_zielonka(&g).unwrap();
        let v = (pick % g.vertex_count() as u64) as usize;
        sol.winner[v] = sol.winner[v].opponent();
        let report = verify(&g, &sol);
        prop_assert!(!report.ok);
    }

    #[test]
    fn redirected_strategy_is_judged_exactly(g in games(30, 6, 0.1), seed: u64) {
        let base = dfi_solution(&g, &freezing());
        let mut rng = SplitMix64::new(seed);
        let owned: Vec<usize> = g
            .vertices()
            .filter(|&v| g.owner(v) == base.winner[v] && g.successors(v).len() > 1)
            .collect();
        prop_assume!(!owned.is_empty());
        let v = owned[rng.below(owned.len() as u64) as usize];
        let others: Vec<usize> = g.successors(v).iter().copied().filter(|&u| Some(u) != base.strategy[v]).collect();
        let u = others[rng.below(others.len() as u64) as usize];
        let mut sol = base.clone();
        sol.strategy[v] = Some(u);
        let report = verify(&g, &sol);
        prop_assert_eq!(report.ok, strategies_win(&g, &sol), "{:?}", report.violations);
        for violation in &report.violations {
            if let Violation::LosingCycleWitness(cycle, max) = violation {
                prop_assert!(confirm_witness(&g, &sol, cycle, *max));
            }
        }
    }

    #[test]
    fn correct_solutions_pass(g in games(30, 6, 0.1)) {
        for sol in [solve_zielonka(&g).unwrap(), dfi_solution(&g, &freezing())] {
            prop_assert!(verify(&g, &sol).ok);
        }
    }
}

#[test]
fn witnesses_are_rejected_when_wrong() {
    let g = paritydfi::fixtures::g1();
    let sol = paritydfi::Solution {
        winner: vec![Player::Even; 2],
        strategy: vec![Some(0), Some(0)],
    };
    assert!(confirm_witness(&g, &sol, &[0], 1));
    assert!(!confirm_witness(&g, &sol, &[], 1));
    assert!(!confirm_witness(&g, &sol, &[0], 2));
    assert!(!confirm_witness(&g, &sol, &[1, 0], 2));
    assert!(!confirm_witness(&g, &sol, &[7], 1));
}
