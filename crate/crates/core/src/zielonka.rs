//! Zielonka's recursive algorithm, kept small and direct. It serves as an
//! independent reference for regions and strategies, not as a fast solver.

use crate::deadline::{Deadline, TimedOut};
use crate::game::{ParityGame, Player};
use crate::graph::{attract, Restriction};
use crate::solution::Solution;
use crate::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZielonkaError {
    #[error("recursion depth limit {0} exceeded")]
    RecursionDepthExceeded(usize),
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

/// Solves with the default depth limit `n + d + 8`.
pub fn solve_zielonka(game: &ParityGame) -> Result<Solution, ZielonkaError> {
    let limit = game.vertex_count() + game.max_priority() as usize + 8;
    solve_zielonka_with(game, limit, Deadline::NEVER)
}

pub fn solve_zielonka_with(
    game: &ParityGame,
    depth_limit: usize,
    deadline: Deadline,
) -> Result<Solution, ZielonkaError> {
    let n = game.vertex_count();
    let mut solver = Zielonka {
        game,
        depth_limit,
        deadline,
        winner: vec![Player::Even; n],
        strategy: vec![None; n],
    };
    solver.solve(Restriction::full(n), 0)?;
    Ok(Solution {
        winner: solver.winner,
        strategy: solver.strategy,
    })
}

struct Zielonka<'a> {
    game: &'a ParityGame,
    depth_limit: usize,
    deadline: Deadline,
    /// Written for the vertices of each subgame as it is solved; entries of a
    /// subgame are overwritten when an enclosing call decides them again.
    winner: Vec<Player>,
    strategy: Vec<Option<Vertex>>,
}

impl Zielonka<'_> {
    /// Solves the subgame `alive`, which must be left-total, writing winners
    /// and strategies for its vertices.
    fn solve(&mut self, alive: Restriction, depth: usize) -> Result<(), ZielonkaError> {
        if depth > self.depth_limit {
            return Err(ZielonkaError::RecursionDepthExceeded(self.depth_limit));
        }
        self.deadline.check()?;
        let game = self.game;
        let Some(top) = alive.vertices().map(|v| game.priority(v)).max() else {
            return Ok(());
        };
        let player = Player::of_priority(top);
        let opponent = player.opponent();
        let heads: Vec<Vertex> = alive
            .vertices()
            .filter(|&v| game.priority(v) == top)
            .collect();
        let attr = attract(game, &alive, player, &heads);

        let mut rest = alive.clone();
        for &v in &attr.members {
            rest.remove(v);
        }
        self.solve(rest.clone(), depth + 1)?;

        let opponent_region: Vec<Vertex> = rest
            .vertices()
            .filter(|&v| self.winner[v] == opponent)
            .collect();
        if opponent_region.is_empty() {
            // The player wins the whole subgame: keep the recursive strategy,
            // use the attractor strategy on the attractor, and let the heads
            // move anywhere inside the subgame.
            for v in alive.vertices() {
                self.winner[v] = player;
                if game.owner(v) != player {
                    self.strategy[v] = None;
                } else if attr.contains[v] {
                    self.strategy[v] = attr.strategy[v].or_else(|| {
                        game.successors(v)
                            .iter()
                            .copied()
                            .find(|&u| alive.contains(u))
                    });
                }
            }
            return Ok(());
        }

        let escape = attract(game, &alive, opponent, &opponent_region);
        let mut remainder = alive.clone();
        for &v in &escape.members {
            remainder.remove(v);
        }
        // The opponent region keeps its strategy from the first recursion;
        // the vertices attracted to it use the attractor strategy.
        let kept = Restriction::from_vertices(game.vertex_count(), opponent_region);
        for &v in &escape.members {
            self.winner[v] = opponent;
            if game.owner(v) != opponent {
                self.strategy[v] = None;
            } else if !kept.contains(v) {
                self.strategy[v] = escape.strategy[v];
            }
        }
        self.solve(remainder, depth + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn g1() {
        let sol = solve_zielonka(&fixtures::g1()).unwrap();
        assert_eq!(sol.winner, vec![Player::Even; 2]);
        assert_eq!(sol.check_well_formed(&fixtures::g1()), Ok(()));
    }

    #[test]
    fn g2() {
        let g = fixtures::g2();
        let sol = solve_zielonka(&g).unwrap();
        assert_eq!(sol.winner, vec![Player::Even; 8]);
        assert_eq!(sol.check_well_formed(&g), Ok(()));
    }

    #[test]
    fn odd_self_loop() {
        let g = ParityGame::new(vec![1], vec![Player::Odd], vec![vec![0]]).unwrap();
        let sol = solve_zielonka(&g).unwrap();
        assert_eq!(sol.winner, vec![Player::Odd]);
        assert_eq!(sol.strategy, vec![Some(0)]);
    }

    #[test]
    fn depth_limit() {
        assert_eq!(
            solve_zielonka_with(&fixtures::g2(), 0, Deadline::NEVER),
            Err(ZielonkaError::RecursionDepthExceeded(0))
        );
    }

    #[test]
    fn empty() {
        assert_eq!(solve_zielonka(&ParityGame::empty()), Ok(Solution::empty()));
    }
}
