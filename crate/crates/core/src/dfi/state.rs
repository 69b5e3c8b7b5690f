use bitvec::prelude::*;

use crate::game::{ParityGame, Player};
use crate::packed::PackedInts;
use crate::{Priority, Vertex};

/// Per-vertex distraction flags, indexed by vertex.
pub type Flags = BitVec<u64, Lsb0>;

/// Who wins `v` under the current distraction estimate: the player matching
/// the parity of its priority, unless `v` is flagged as a distraction.
#[inline]
pub fn winner_of(game: &ParityGame, distractions: &BitSlice<u64, Lsb0>, v: Vertex) -> Player {
    Player::from_bit((game.priority(v) & 1 == 1) ^ distractions[v])
}

/// One-step estimate for `v`: if the owner has a successor it currently
/// wins, the owner wins and the first such successor is returned. Otherwise
/// the opponent wins and there is no choice.
#[inline]
pub fn onestep(
    game: &ParityGame,
    distractions: &BitSlice<u64, Lsb0>,
    v: Vertex,
) -> (Player, Option<Vertex>) {
    let owner = game.owner(v);
    for &u in game.successors(v) {
        if winner_of(game, distractions, u) == owner {
            return (owner, Some(u));
        }
    }
    (owner.opponent(), None)
}

/// Working state of one solver run: distraction flags, freeze levels and
/// the current strategy choice of every vertex.
///
/// Freeze levels and choices are bit-packed: a freeze level takes
/// `ceil(log2(d + 2))` bits and a choice `ceil(log2(n + 1))` bits.
#[derive(Debug, Clone)]
pub struct DistractionState {
    pub(super) distractions: Flags,
    /// `0` when not frozen, otherwise the freeze priority plus one.
    pub(super) frozen: PackedInts,
    /// `0` when no choice, otherwise the successor plus one.
    pub(super) choice: PackedInts,
    pub(super) cursor: Priority,
}

impl DistractionState {
    pub(super) fn new(n: usize, max_priority: Priority, with_strategies: bool) -> Self {
        let tracked = if with_strategies { n } else { 0 };
        DistractionState {
            distractions: bitvec![u64, Lsb0; 0; n],
            frozen: PackedInts::zeroed(tracked, max_priority as u64 + 1),
            choice: PackedInts::zeroed(tracked, n as u64),
            cursor: 0,
        }
    }

    pub fn distractions(&self) -> &BitSlice<u64, Lsb0> {
        &self.distractions
    }

    #[inline]
    pub fn is_distraction(&self, v: Vertex) -> bool {
        self.distractions[v]
    }

    /// The priority at which `v` is frozen, if any. Always `None` in basic mode.
    #[inline]
    pub fn frozen_at(&self, v: Vertex) -> Option<Priority> {
        if self.frozen.is_empty() {
            return None;
        }
        match self.frozen.get(v) {
            0 => None,
            p => Some(p as Priority - 1),
        }
    }

    #[inline]
    pub(super) fn set_frozen(&mut self, v: Vertex, level: Option<Priority>) {
        self.frozen.set(v, level.map_or(0, |p| p as u64 + 1));
    }

    /// The successor last chosen for `v`. Always `None` in basic mode.
    #[inline]
    pub fn choice(&self, v: Vertex) -> Option<Vertex> {
        if self.choice.is_empty() {
            return None;
        }
        match self.choice.get(v) {
            0 => None,
            u => Some(u as Vertex - 1),
        }
    }

    #[inline]
    pub(super) fn set_choice(&mut self, v: Vertex, choice: Option<Vertex>) {
        self.choice.set(v, choice.map_or(0, |u| u as u64 + 1));
    }

    /// The priority level currently being evaluated.
    pub fn cursor(&self) -> Priority {
        self.cursor
    }

    /// Bytes held by the flag, freeze and choice buffers.
    pub fn allocated_bytes(&self) -> usize {
        std::mem::size_of_val(self.distractions.as_raw_slice())
            + self.frozen.allocated_bytes()
            + self.choice.allocated_bytes()
    }
}
