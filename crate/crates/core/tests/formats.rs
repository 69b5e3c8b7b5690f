mod common;

use common::*;
use paritydfi::format::{parse_pgsolver, parse_solution, write_pgsolver, write_solution};
use paritydfi::ParityGame;
use proptest::prelude::*;

fn relabel(g: &ParityGame, stride: u64) -> ParityGame {
    let mut b = paritydfi::GameBuilder::new();
    for v in g.vertices() {
        let succ = g
            .successors(v)
            .iter()
            .map(|&u| u as u64 * stride + 3)
            .collect();
        let label = (v % 3 == 0).then(|| format!("v \"{v}\""));
        b.add_vertex(
            v as u64 * stride + 3,
            g.priority(v),
            g.owner(v),
            succ,
            label,
        )
        .unwrap();
    }
    b.build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn game_round_trip(g in games(30, 9, 0.2), stride in 1u64..5) {
        let g = relabel(&g, stride);
        let text = write_pgsolver(&g);
        let back = parse_pgsolver(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_pgsolver(&back), text);
    }

    #[test]
    fn solution_round_trip(g in games(30, 9, 0.2), stride in 1u64..5) {
        let g = relabel(&g, stride);
        let sol = dfi_solution(&g, &freezing());
        let text = write_solution(&g, &sol);
        prop_assert_eq!(parse_solution(&text, &g).unwrap(), sol);
    }
}
