#![allow(dead_code)]

use paritydfi::dfi::{self, DistractionState, Mode, Observer, PassSemantics, SolverOptions};
use paritydfi::generate::{random_game, GenParams};
use paritydfi::{ParityGame, Player, Priority, Solution, Vertex};
use proptest::prelude::*;

/// Games with `n` in `1..=max_n`, priorities up to `max_d`, outdegree in
/// `[1, min(4, n)]`.
pub fn games(max_n: usize, max_d: Priority, self_loops: f64) -> impl Strategy<Value = ParityGame> {
    (1..=max_n, 0..=max_d, any::<u64>()).prop_map(move |(n, d, seed)| {
        random_game(&GenParams::new(n, d, seed).self_loops(self_loops)).unwrap()
    })
}

/// The differential suite: game `i` of a fixed seeded family.
pub fn suite_game(i: u64, max_n: u64, max_d: u64, self_loops: f64) -> ParityGame {
    let mut rng = paritydfi::generate::SplitMix64::new(0x5eed ^ i.wrapping_mul(0x9e37_79b9));
    let n = 1 + rng.below(max_n) as usize;
    let d = rng.below(max_d + 1) as Priority;
    random_game(&GenParams::new(n, d, rng.next_u64()).self_loops(self_loops)).unwrap()
}

pub fn freezing() -> SolverOptions {
    SolverOptions::default()
}

pub fn in_place() -> SolverOptions {
    SolverOptions::default().with_semantics(PassSemantics::InPlace)
}

pub fn dfi_solution(game: &ParityGame, options: &SolverOptions) -> Solution {
    dfi::solve_game(game, options)
        .unwrap()
        .into_solution()
        .expect("freezing mode yields strategies")
}

pub fn basic_regions(game: &ParityGame) -> Vec<Player> {
    dfi::solve_game(game, &SolverOptions::basic())
        .unwrap()
        .winner
}

/// Records every breach of the freezing discipline: a vertex frozen at a
/// level not above its priority, frozen while not won by the opponent of
/// the level's player, or evaluated while frozen.
pub struct FreezeChecker<'g> {
    pub game: &'g ParityGame,
    pub violations: Vec<String>,
    pub freezes: u64,
    pub evaluations: u64,
}

impl<'g> FreezeChecker<'g> {
    pub fn new(game: &'g ParityGame) -> Self {
        FreezeChecker {
            game,
            violations: Vec::new(),
            freezes: 0,
            evaluations: 0,
        }
    }
}

impl Observer for FreezeChecker<'_> {
    fn evaluated(&mut self, v: Vertex, _: Player, _: Option<Vertex>, state: &DistractionState) {
        self.evaluations += 1;
        if let Some(level) = state.frozen_at(v) {
            self.violations
                .push(format!("{v} evaluated while frozen at {level}"));
        }
    }

    fn frozen(&mut self, v: Vertex, level: Priority, state: &DistractionState) {
        self.freezes += 1;
        let pr = self.game.priority(v);
        if level <= pr {
            self.violations
                .push(format!("{v} (priority {pr}) frozen at {level}"));
        }
        let expected = Player::of_priority(level).opponent();
        let actual = dfi::winner_of(self.game, state.distractions(), v);
        if actual != expected {
            self.violations
                .push(format!("{v} frozen at {level} while won by {actual}"));
        }
    }
}

/// Runs the freezing solver under the checker on the sorted game.
pub fn freeze_violations(game: &ParityGame, semantics: PassSemantics) -> (Vec<String>, u64) {
    let (sorted, _) = paritydfi::sort_by_priority(game);
    let mut checker = FreezeChecker::new(&sorted);
    let options = SolverOptions {
        mode: Mode::Freezing,
        ..SolverOptions::default().with_semantics(semantics)
    };
    dfi::solve_observed(&sorted, &options, &mut checker).unwrap();
    (checker.violations, checker.freezes)
}

/// The game with every `player` vertex of `region` limited to its strategy
/// edge.
pub fn restrict_to_strategy(game: &ParityGame, solution: &Solution, player: Player) -> ParityGame {
    let succ = game
        .vertices()
        .map(|v| match solution.strategy[v] {
            Some(u) if solution.winner[v] == player && game.owner(v) == player => vec![u],
            _ => game.successors(v).to_vec(),
        })
        .collect();
    ParityGame::new(game.priorities().to_vec(), game.owners().to_vec(), succ).unwrap()
}

/// Whether the claimed strategies really win every claimed vertex, decided
/// with Zielonka on the strategy-restricted games. Assumes the winner map is
/// the true one and strategies are edges.
pub fn strategies_win(game: &ParityGame, solution: &Solution) -> bool {
    [Player::Even, Player::Odd].into_iter().all(|player| {
        let restricted = restrict_to_strategy(game, solution, player);
        let truth = paritydfi::zielonka::solve_zielonka(&restricted).unwrap();
        game.vertices().all(|v| {
            solution.winner[v] != player
                || (truth.winner[v] == player
                    && (game.owner(v) != player
                        || solution.strategy[v].is_some_and(|u| solution.winner[u] == player)))
        })
    })
}
