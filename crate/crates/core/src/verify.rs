//! Independent checking of claimed solutions.
//!
//! A solution is correct when, for each player α with claimed region `W`:
//!
//! - no vertex of the opponent in `W` has a successor outside `W`,
//! - every vertex of α in `W` has a strategy edge that stays in `W`,
//! - every cycle in `W` that follows α's strategy has a maximum priority of
//!   α's parity.
//!
//! The last condition is decided by peeling: in every cyclic SCC of the
//! strategy-restricted graph the top priority must be α's, and once it is,
//! removing the top-priority vertices leaves the cycles still to be checked.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::game::{ParityGame, Player};
use crate::graph::SccFinder;
use crate::solution::Solution;
use crate::{Priority, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// Winner and strategy vectors do not match the game size.
    WrongLength { expected: usize, found: usize },
    /// A vertex of the loser can leave the region.
    EscapeEdge(Vertex, Vertex),
    /// A vertex of the winner has no strategy.
    MissingStrategy(Vertex),
    /// The strategy of a winner vertex points outside its region.
    StrategyLeavesRegion(Vertex, Vertex),
    /// The strategy names a vertex that is not a successor.
    NotAnEdge(Vertex, Vertex),
    /// A strategy is given for a vertex whose owner lost it.
    UnexpectedStrategy(Vertex),
    /// A cycle consistent with the winner's strategy, listed in play order,
    /// whose maximum priority has the loser's parity.
    LosingCycleWitness(Vec<Vertex>, Priority),
}

impl Violation {
    /// Renders the violation with the game's original vertex ids.
    pub fn describe(&self, game: &ParityGame) -> String {
        let id = |v: &Vertex| game.original_id(*v);
        match self {
            Violation::WrongLength { expected, found } => {
                format!("solution covers {found} vertices, game has {expected}")
            }
            Violation::EscapeEdge(v, u) => {
                format!(
                    "escape edge {} -> {} leaves the region of {}",
                    id(v),
                    id(u),
                    id(v)
                )
            }
            Violation::MissingStrategy(v) => format!("missing strategy for {}", id(v)),
            Violation::StrategyLeavesRegion(v, u) => {
                format!("strategy {} -> {} leaves the region", id(v), id(u))
            }
            Violation::NotAnEdge(v, u) => format!("strategy {} -> {} is not an edge", id(v), id(u)),
            Violation::UnexpectedStrategy(v) => {
                format!("strategy given for {}, which its owner loses", id(v))
            }
            Violation::LosingCycleWitness(cycle, max) => {
                let ids: Vec<String> = cycle.iter().map(|v| id(v).to_string()).collect();
                format!(
                    "losing cycle [{}] with maximum priority {max}",
                    ids.join(" ")
                )
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_violations(violations: Vec<Violation>) -> VerificationReport {
        VerificationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

pub fn verify(game: &ParityGame, solution: &Solution) -> VerificationReport {
    let n = game.vertex_count();
    for found in [solution.winner.len(), solution.strategy.len()] {
        if found != n {
            return VerificationReport::from_violations(vec![Violation::WrongLength {
                expected: n,
                found,
            }]);
        }
    }
    let mut violations = Vec::new();
    for player in [Player::Even, Player::Odd] {
        check_region(game, solution, player, &mut violations);
    }
    VerificationReport::from_violations(violations)
}

/// Strategy edge of a winner vertex, if it is a real edge inside the region.
fn valid_choice(game: &ParityGame, solution: &Solution, v: Vertex) -> Option<Vertex> {
    let u = solution.strategy[v]?;
    (u < game.vertex_count() && game.has_edge(v, u) && solution.winner[u] == solution.winner[v])
        .then_some(u)
}

fn check_region(game: &ParityGame, solution: &Solution, player: Player, out: &mut Vec<Violation>) {
    let n = game.vertex_count();
    let in_region: Vec<bool> = solution.winner.iter().map(|&w| w == player).collect();

    // Successors in the graph restricted by the player's strategy.
    let mut restricted: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| in_region[v]) {
        if game.owner(v) == player {
            match solution.strategy[v] {
                None => out.push(Violation::MissingStrategy(v)),
                Some(u) if u >= n || !game.has_edge(v, u) => out.push(Violation::NotAnEdge(v, u)),
                Some(u) if !in_region[u] => out.push(Violation::StrategyLeavesRegion(v, u)),
                Some(u) => restricted[v].push(u),
            }
        } else {
            if solution.strategy[v].is_some() {
                out.push(Violation::UnexpectedStrategy(v));
            }
            for &u in game.successors(v) {
                if in_region[u] {
                    restricted[v].push(u);
                } else {
                    out.push(Violation::EscapeEdge(v, u));
                }
            }
        }
    }

    let mut finder = SccFinder::new(n);
    let roots: Vec<Vertex> = (0..n).filter(|&v| in_region[v]).collect();
    let mut pending = finder.run(roots, &in_region, |v| &restricted[v]);
    // Scratch mask holding the part of one component still to be checked.
    let mut alive = vec![false; n];
    while let Some(component) = pending.pop() {
        if !component.cyclic {
            continue;
        }
        let max = component
            .vertices
            .iter()
            .map(|&v| game.priority(v))
            .max()
            .expect("components are nonempty");
        if Player::of_priority(max) != player {
            let top = *component
                .vertices
                .iter()
                .find(|&&v| game.priority(v) == max)
                .expect("maximum is attained");
            let cycle = cycle_through(top, &component.vertices, &restricted);
            out.push(Violation::LosingCycleWitness(cycle, max));
            continue;
        }
        // Every cycle through a top vertex is fine; check the rest.
        let rest: Vec<Vertex> = component
            .vertices
            .into_iter()
            .filter(|&v| game.priority(v) != max)
            .collect();
        for &v in &rest {
            alive[v] = true;
        }
        pending.extend(finder.run(rest.iter().copied(), &alive, |v| &restricted[v]));
        for &v in &rest {
            alive[v] = false;
        }
    }
}

/// Shortest cycle from `start` back to itself inside one component, by BFS.
fn cycle_through(start: Vertex, component: &[Vertex], restricted: &[Vec<Vertex>]) -> Vec<Vertex> {
    let members: HashSet<Vertex> = component.iter().copied().collect();
    let mut parent: HashMap<Vertex, Vertex> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &u in &restricted[v] {
            if !members.contains(&u) {
                continue;
            }
            if u == start {
                let mut cycle = vec![v];
                let mut w = v;
                while w != start {
                    w = parent[&w];
                    cycle.push(w);
                }
                cycle.reverse();
                return cycle;
            }
            if let Entry::Vacant(e) = parent.entry(u) {
                e.insert(v);
                queue.push_back(u);
            }
        }
    }
    unreachable!("vertex {start} lies on a cycle of its component")
}

/// Checks a witness in time linear in its length: consecutive vertices are
/// edges consistent with the claimed winner's strategy, all inside one
/// claimed region, and the maximum priority is `max` with the loser's parity.
pub fn confirm_witness(
    game: &ParityGame,
    solution: &Solution,
    cycle: &[Vertex],
    max: Priority,
) -> bool {
    let Some(&first) = cycle.first() else {
        return false;
    };
    let n = game.vertex_count();
    if cycle.iter().any(|&v| v >= n) {
        return false;
    }
    let player = solution.winner[first];
    let consistent = cycle.iter().enumerate().all(|(i, &v)| {
        let u = cycle[(i + 1) % cycle.len()];
        solution.winner[v] == player
            && game.has_edge(v, u)
            && (game.owner(v) != player || valid_choice(game, solution, v) == Some(u))
    });
    let top = cycle.iter().map(|&v| game.priority(v)).max();
    consistent && top == Some(max) && Player::of_priority(max) != player
}
