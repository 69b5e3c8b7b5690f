//! Reductions that decide parts of a game before the main solver runs.
//!
//! Every decided region is an attractor computed inside the still-undecided
//! part, so the remaining vertices form a left-total subgame and the loser of
//! a decided region can only leave it towards regions the winner already
//! holds. Composing a solution of the residual game with the decided part
//! therefore yields a solution of the whole game.
//!
//! - [`eliminate_self_loops`]: a vertex whose owner matches its priority's
//!   parity and has a self-loop is won by looping. A self-loop against the
//!   owner's parity is useless to the owner and is deleted, unless it is the
//!   only move left, in which case the opponent wins the vertex.
//! - [`winner_controlled_cycles`]: cycles made only of vertices that player α
//!   owns and whose priorities have α's parity are won by α.

use crate::game::{ParityGame, Player};
use crate::graph::{attract_filtered, strongly_connected, Restriction};
use crate::solution::Solution;
use crate::Vertex;

/// The decided part of a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSolution {
    winner: Vec<Option<Player>>,
    strategy: Vec<Option<Vertex>>,
    residual: Restriction,
}

impl PartialSolution {
    fn undecided(n: usize) -> PartialSolution {
        PartialSolution {
            winner: vec![None; n],
            strategy: vec![None; n],
            residual: Restriction::full(n),
        }
    }

    pub fn is_decided(&self, v: Vertex) -> bool {
        self.winner[v].is_some()
    }

    pub fn winner(&self, v: Vertex) -> Option<Player> {
        self.winner[v]
    }

    pub fn strategy(&self, v: Vertex) -> Option<Vertex> {
        self.strategy[v]
    }

    pub fn decided_count(&self) -> usize {
        self.winner.iter().filter(|w| w.is_some()).count()
    }

    /// The undecided vertices.
    pub fn residual(&self) -> &Restriction {
        &self.residual
    }
}

/// A partial solution with the residual game still to be solved.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub partial: PartialSolution,
    /// The undecided vertices as a game of their own, keeping original ids.
    pub game: ParityGame,
    /// For each vertex of the residual game, the vertex it came from.
    pub origin: Vec<Vertex>,
}

impl Reduced {
    /// Combines a solution of the residual game with the decided part.
    ///
    /// # Panics
    /// If `residual` does not cover the residual game.
    pub fn compose(&self, residual: &Solution) -> Solution {
        assert_eq!(
            residual.len(),
            self.origin.len(),
            "residual solution size mismatch"
        );
        let partial = &self.partial;
        let mut winner: Vec<Player> = partial
            .winner
            .iter()
            .map(|w| w.unwrap_or(Player::Even))
            .collect();
        let mut strategy = partial.strategy.clone();
        for (i, &v) in self.origin.iter().enumerate() {
            winner[v] = residual.winner[i];
            strategy[v] = residual.strategy[i].map(|u| self.origin[u]);
        }
        Solution { winner, strategy }
    }

    /// Same as [`Reduced::compose`] for a region-only result.
    pub fn compose_regions(&self, residual: &[Player]) -> Vec<Player> {
        assert_eq!(
            residual.len(),
            self.origin.len(),
            "residual solution size mismatch"
        );
        let mut winner: Vec<Player> = self
            .partial
            .winner
            .iter()
            .map(|w| w.unwrap_or(Player::Even))
            .collect();
        for (i, &v) in self.origin.iter().enumerate() {
            winner[v] = residual[i];
        }
        winner
    }
}

pub fn eliminate_self_loops(game: &ParityGame) -> Reduced {
    let mut r = Reducer::new(game);
    r.self_loops();
    r.finish()
}

pub fn winner_controlled_cycles(game: &ParityGame) -> Reduced {
    let mut r = Reducer::new(game);
    r.controlled_cycles();
    r.finish()
}

/// Both reductions, self-loops first.
pub fn preprocess(game: &ParityGame) -> Reduced {
    let mut r = Reducer::new(game);
    r.self_loops();
    r.controlled_cycles();
    r.finish()
}

struct Reducer<'g> {
    game: &'g ParityGame,
    partial: PartialSolution,
    deleted_loop: Vec<bool>,
}

impl<'g> Reducer<'g> {
    fn new(game: &'g ParityGame) -> Reducer<'g> {
        let n = game.vertex_count();
        Reducer {
            game,
            partial: PartialSolution::undecided(n),
            deleted_loop: vec![false; n],
        }
    }

    /// Decides `player`'s attractor of `targets` in the residual game. The
    /// targets keep the strategies in `target_choice` where given.
    fn decide(
        &mut self,
        player: Player,
        targets: &[Vertex],
        target_choice: impl Fn(Vertex) -> Option<Vertex>,
    ) {
        let deleted = &self.deleted_loop;
        let attr = attract_filtered(
            self.game,
            &self.partial.residual,
            player,
            targets,
            |v, u| !(v == u && deleted[v]),
        );
        for &v in &attr.members {
            self.partial.winner[v] = Some(player);
            self.partial.strategy[v] = if self.game.owner(v) == player {
                target_choice(v).or(attr.strategy[v])
            } else {
                None
            };
        }
        for &v in &attr.members {
            self.partial.residual.remove(v);
        }
    }

    fn self_loops(&mut self) {
        let game = self.game;
        for v in game.vertices() {
            if !self.partial.residual.contains(v) || self.deleted_loop[v] || !game.has_edge(v, v) {
                continue;
            }
            let parity = Player::of_priority(game.priority(v));
            if parity == game.owner(v) {
                self.decide(parity, &[v], |w| (w == v).then_some(v));
            } else if game
                .successors(v)
                .iter()
                .any(|&u| u != v && self.partial.residual.contains(u))
            {
                self.deleted_loop[v] = true;
            } else {
                self.decide(parity, &[v], |_| None);
            }
        }
    }

    fn controlled_cycles(&mut self) {
        let game = self.game;
        for player in [Player::Even, Player::Odd] {
            let mask: Vec<bool> = game
                .vertices()
                .map(|v| {
                    self.partial.residual.contains(v)
                        && game.owner(v) == player
                        && Player::of_priority(game.priority(v)) == player
                })
                .collect();
            let mut component_of = vec![usize::MAX; game.vertex_count()];
            let mut targets = Vec::new();
            for (i, c) in strongly_connected(&mask, |v| game.successors(v))
                .into_iter()
                .enumerate()
                .filter(|(_, c)| c.cyclic)
            {
                for &v in &c.vertices {
                    component_of[v] = i;
                }
                targets.extend(c.vertices);
            }
            if targets.is_empty() {
                continue;
            }
            let deleted = &self.deleted_loop;
            let choice = |v: Vertex| {
                game.successors(v)
                    .iter()
                    .copied()
                    .find(|&u| component_of[u] == component_of[v] && !(u == v && deleted[v]))
            };
            let mut choices = vec![None; game.vertex_count()];
            for &v in &targets {
                choices[v] = choice(v);
            }
            self.decide(player, &targets, |v| choices[v]);
        }
    }

    fn finish(self) -> Reduced {
        let origin: Vec<Vertex> = self.partial.residual.vertices().collect();
        let deleted = &self.deleted_loop;
        let residual = self.game.induced(&origin, |v, u| !(v == u && deleted[v]));
        debug_assert_eq!(residual.validate(), Ok(()));
        Reduced {
            partial: self.partial,
            game: residual,
            origin,
        }
    }
}
