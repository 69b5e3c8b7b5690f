//! Set semantics of the modal mu-calculus over a parity game, and a literal
//! nested-fixpoint evaluation of the formula whose value is Even's winning
//! region:
//!
//! ```text
//! Win0 = σX_k ... μX_1 . νX_0 .
//!          (V_Even ∧ ⋁_p ◇(V_p ∧ X_p)) ∨ (V_Odd ∧ ⋀_p □(¬V_p ∨ X_p))
//! ```
//!
//! with one variable per priority present in the game, the highest priority
//! outermost, `ν` for even and `μ` for odd priorities.
//!
//! Evaluation is exponential in the number of priorities. It exists to check
//! the solvers on small games.

use std::collections::BTreeMap;
use std::fmt;

use bitvec::prelude::*;

use crate::deadline::{Deadline, TimedOut};
use crate::game::{ParityGame, Player};
use crate::{Priority, Vertex};

/// A subset of the vertices of one game.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(BitVec<u64, Lsb0>);

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl VertexSet {
    pub fn empty(n: usize) -> VertexSet {
        VertexSet(bitvec![u64, Lsb0; 0; n])
    }

    pub fn full(n: usize) -> VertexSet {
        VertexSet(bitvec![u64, Lsb0; 1; n])
    }

    pub fn from_fn(n: usize, mut member: impl FnMut(Vertex) -> bool) -> VertexSet {
        VertexSet((0..n).map(&mut member).collect())
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = Vertex>) -> VertexSet {
        let mut s = VertexSet::empty(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    /// Size of the universe.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.0[v]
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0.set(v, true);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0.not_any()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter_ones()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.clone() | &other.0)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.clone() & &other.0)
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet(!self.0.clone())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter_ones().all(|v| other.0[v])
    }
}

/// Variable bindings, one per priority level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    bindings: BTreeMap<Priority, VertexSet>,
}

impl Environment {
    pub fn new() -> Environment {
        Environment::default()
    }

    pub fn bind(&mut self, level: Priority, set: VertexSet) {
        self.bindings.insert(level, set);
    }

    /// # Panics
    /// If `level` is unbound.
    pub fn get(&self, level: Priority) -> &VertexSet {
        self.bindings
            .get(&level)
            .unwrap_or_else(|| panic!("variable for level {level} is unbound"))
    }
}

/// `◇S`: vertices with some successor in `set`.
pub fn diamond(set: &VertexSet, game: &ParityGame) -> VertexSet {
    VertexSet::from_fn(game.vertex_count(), |v| {
        game.successors(v).iter().any(|&u| set.contains(u))
    })
}

/// `□S`: vertices whose successors all lie in `set`.
pub fn square(set: &VertexSet, game: &ParityGame) -> VertexSet {
    VertexSet::from_fn(game.vertex_count(), |v| {
        game.successors(v).iter().all(|&u| set.contains(u))
    })
}

pub fn owned_by(game: &ParityGame, player: Player) -> VertexSet {
    VertexSet::from_fn(game.vertex_count(), |v| game.owner(v) == player)
}

pub fn with_priority(game: &ParityGame, priority: Priority) -> VertexSet {
    VertexSet::from_fn(game.vertex_count(), |v| game.priority(v) == priority)
}

/// Vertices with a priority of `player`'s parity.
pub fn with_parity(game: &ParityGame, player: Player) -> VertexSet {
    VertexSet::from_fn(game.vertex_count(), |v| {
        Player::of_priority(game.priority(v)) == player
    })
}

/// One-step attractor: `(V_player ∧ ◇X) ∨ (V_opponent ∧ □X)`.
pub fn force(player: Player, set: &VertexSet, game: &ParityGame) -> VertexSet {
    let mine = owned_by(game, player);
    mine.intersection(&diamond(set, game))
        .union(&mine.complement().intersection(&square(set, game)))
}

/// The one-step estimates of both players under distraction set `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnestepSets {
    pub even: VertexSet,
    pub odd: VertexSet,
    /// Vertices estimated to be won in one step by the player not matching
    /// their priority's parity.
    pub distraction: VertexSet,
}

/// Vertices won by `player` under distraction set `distractions`.
pub fn estimated_region(game: &ParityGame, distractions: &VertexSet, player: Player) -> VertexSet {
    let matching = with_parity(game, player);
    matching
        .intersection(&distractions.complement())
        .union(&matching.complement().intersection(distractions))
}

pub fn onestep_sets(distractions: &VertexSet, game: &ParityGame) -> OnestepSets {
    let even_region = estimated_region(game, distractions, Player::Even);
    let odd_region = estimated_region(game, distractions, Player::Odd);
    let even_owned = owned_by(game, Player::Even);
    let odd_owned = even_owned.complement();
    let even = even_owned
        .intersection(&diamond(&even_region, game))
        .union(&odd_owned.intersection(&square(&even_region, game)));
    let odd = even_owned
        .intersection(&square(&odd_region, game))
        .union(&odd_owned.intersection(&diamond(&odd_region, game)));
    let even_priority = with_parity(game, Player::Even);
    let distraction = even_priority
        .intersection(&odd)
        .union(&even_priority.complement().intersection(&even));
    OnestepSets {
        even,
        odd,
        distraction,
    }
}

/// The priority levels present in a game with their vertex sets.
#[derive(Debug, Clone)]
pub struct PriorityPartition {
    levels: Vec<(Priority, VertexSet)>,
}

impl PriorityPartition {
    pub fn of(game: &ParityGame) -> PriorityPartition {
        let mut present: Vec<Priority> = game.priorities().to_vec();
        present.sort_unstable();
        present.dedup();
        PriorityPartition {
            levels: present
                .into_iter()
                .map(|p| (p, with_priority(game, p)))
                .collect(),
        }
    }

    /// Present priorities in ascending order.
    pub fn priorities(&self) -> impl Iterator<Item = Priority> + '_ {
        self.levels.iter().map(|(p, _)| *p)
    }

    /// `⋁_p (V_p ∧ X_p)`.
    pub fn select_any(&self, env: &Environment, n: usize) -> VertexSet {
        self.levels
            .iter()
            .fold(VertexSet::empty(n), |acc, (p, vp)| {
                acc.union(&vp.intersection(env.get(*p)))
            })
    }

    /// `⋀_p (¬V_p ∨ X_p)`.
    pub fn select_all(&self, env: &Environment, n: usize) -> VertexSet {
        self.levels.iter().fold(VertexSet::full(n), |acc, (p, vp)| {
            acc.intersection(&vp.complement().union(env.get(*p)))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixpointError {
    #[error("body evaluation budget exhausted after {0} evaluations")]
    BudgetExceeded(u64),
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// One fixpoint iteration step, reported to [`bfl_win0_traced`].
#[derive(Debug)]
pub struct Iterate<'a> {
    pub level: Priority,
    /// `true` for a least fixpoint.
    pub least: bool,
    pub before: &'a VertexSet,
    pub after: &'a VertexSet,
    /// Iterations of this fixpoint so far, including this one.
    pub round: usize,
}

/// Even's winning region by naive nested fixpoint evaluation.
pub fn bfl_win0(game: &ParityGame) -> Result<VertexSet, FixpointError> {
    bfl_win0_traced(game, DEFAULT_BUDGET, |_| {})
}

pub fn bfl_win0_with_budget(game: &ParityGame, budget: u64) -> Result<VertexSet, FixpointError> {
    bfl_win0_traced(game, budget, |_| {})
}

/// Like [`bfl_win0_with_budget`], also giving up once `deadline` passes.
pub fn bfl_win0_until(
    game: &ParityGame,
    budget: u64,
    deadline: Deadline,
) -> Result<VertexSet, FixpointError> {
    evaluate(game, budget, deadline, |_| {})
}

pub fn bfl_win0_traced(
    game: &ParityGame,
    budget: u64,
    observe: impl FnMut(Iterate<'_>),
) -> Result<VertexSet, FixpointError> {
    evaluate(game, budget, Deadline::NEVER, observe)
}

fn evaluate(
    game: &ParityGame,
    budget: u64,
    deadline: Deadline,
    observe: impl FnMut(Iterate<'_>),
) -> Result<VertexSet, FixpointError> {
    let partition = PriorityPartition::of(game);
    let mut eval = Evaluator {
        game,
        even_owned: owned_by(game, Player::Even),
        partition,
        env: Environment::new(),
        budget,
        used: 0,
        deadline,
        observe,
    };
    let outermost = eval.partition.levels.len();
    eval.fixpoint(outermost)
}

struct Evaluator<'g, F> {
    game: &'g ParityGame,
    even_owned: VertexSet,
    partition: PriorityPartition,
    env: Environment,
    budget: u64,
    used: u64,
    deadline: Deadline,
    observe: F,
}

impl<F: FnMut(Iterate<'_>)> Evaluator<'_, F> {
    /// Value of the formula with the `depth` innermost variables still to be
    /// bound by fixpoints (depth 0 is the body).
    fn fixpoint(&mut self, depth: usize) -> Result<VertexSet, FixpointError> {
        let n = self.game.vertex_count();
        if depth == 0 {
            return self.body();
        }
        let level = self.partition.levels[depth - 1].0;
        let least = Player::of_priority(level) == Player::Odd;
        let mut current = if least {
            VertexSet::empty(n)
        } else {
            VertexSet::full(n)
        };
        let mut round = 0;
        loop {
            round += 1;
            self.env.bind(level, current.clone());
            let next = self.fixpoint(depth - 1)?;
            (self.observe)(Iterate {
                level,
                least,
                before: &current,
                after: &next,
                round,
            });
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    fn body(&mut self) -> Result<VertexSet, FixpointError> {
        if self.used >= self.budget {
            return Err(FixpointError::BudgetExceeded(self.used));
        }
        self.used += 1;
        self.deadline.check()?;
        let n = self.game.vertex_count();
        let mut some = VertexSet::empty(n);
        let mut all = VertexSet::full(n);
        for (p, vp) in &self.partition.levels {
            let x = self.env.get(*p);
            some = some.union(&diamond(&vp.intersection(x), self.game));
            all = all.intersection(&square(&vp.complement().union(x), self.game));
        }
        Ok(self
            .even_owned
            .intersection(&some)
            .union(&self.even_owned.complement().intersection(&all)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn modalities_on_extremes() {
        let g = fixtures::g2();
        let all = VertexSet::full(8);
        let none = VertexSet::empty(8);
        assert_eq!(diamond(&all, &g), all);
        assert_eq!(square(&all, &g), all);
        assert_eq!(diamond(&none, &g), none);
        assert_eq!(square(&none, &g), none);
    }

    #[test]
    fn modalities_on_g1() {
        let g = fixtures::g1();
        let s = VertexSet::from_vertices(2, [1]);
        assert_eq!(diamond(&s, &g), VertexSet::from_vertices(2, [0]));
        assert_eq!(square(&s, &g), VertexSet::empty(2));
    }

    #[test]
    fn onestep_sets_g1() {
        let g = fixtures::g1();
        let sets = onestep_sets(&VertexSet::empty(2), &g);
        assert_eq!(sets.even, VertexSet::from_vertices(2, [0]));
        assert_eq!(sets.odd, VertexSet::from_vertices(2, [1]));
        // v1 (priority 2) is also estimated lost: its only successor has an
        // odd priority and is not yet a distraction.
        assert_eq!(sets.distraction, VertexSet::full(2));
    }

    #[test]
    fn win0_small_cases() {
        assert_eq!(bfl_win0(&fixtures::g1()).unwrap(), VertexSet::full(2));
        assert_eq!(bfl_win0(&fixtures::g2()).unwrap(), VertexSet::full(8));
        let even_loop = ParityGame::new(vec![2], vec![Player::Odd], vec![vec![0]]).unwrap();
        assert_eq!(bfl_win0(&even_loop).unwrap(), VertexSet::full(1));
        let odd_loop = ParityGame::new(vec![3], vec![Player::Even], vec![vec![0]]).unwrap();
        assert_eq!(bfl_win0(&odd_loop).unwrap(), VertexSet::empty(1));
        assert_eq!(bfl_win0(&ParityGame::empty()).unwrap(), VertexSet::empty(0));
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            bfl_win0_with_budget(&fixtures::g2(), 3),
            Err(FixpointError::BudgetExceeded(3))
        );
    }

    #[test]
    #[should_panic(expected = "unbound")]
    fn unbound_variable_panics() {
        Environment::new().get(3);
    }
}
