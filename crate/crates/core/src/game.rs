//! The parity game model: players, the immutable game graph, validation and
//! the priority-sorted internal order used by the solver.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use crate::{Priority, Vertex};

/// One of the two players. The discriminant matches parity arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Player {
    Even = 0,
    Odd = 1,
}

impl Player {
    /// The player that wins plays whose dominating priority is `priority`.
    #[inline]
    pub fn of_priority(priority: Priority) -> Player {
        Player::from_bit(priority & 1 == 1)
    }

    #[inline]
    pub fn from_bit(bit: bool) -> Player {
        if bit {
            Player::Odd
        } else {
            Player::Even
        }
    }

    #[inline]
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self == Player::Odd
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Even => write!(f, "Even"),
            Player::Odd => write!(f, "Odd"),
        }
    }
}

/// Structural problems with a game. Vertices are reported by their external
/// identifier, which equals the dense index for games built from dense parts.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("vertex {0} has no successors")]
    SinkVertex(u64),
    #[error("edge from vertex {0} to unknown vertex {1}")]
    DanglingEdge(u64, u64),
    #[error("duplicate edge from vertex {0} to vertex {1}")]
    DuplicateEdge(u64, u64),
    #[error("vertex identifier {0} is defined more than once")]
    DuplicateVertexId(u64),
    #[error("per-vertex arrays disagree in length")]
    InconsistentLengths,
}

/// Predecessor lists in compressed form, built on first use.
#[derive(Debug, Clone)]
pub(crate) struct Predecessors {
    offsets: Vec<usize>,
    sources: Vec<Vertex>,
}

/// An explicit max-parity game: the highest priority seen infinitely often
/// decides the winner of a play.
///
/// Vertices are dense indices `0..n`. Successor lists are stored in one
/// flat array and keep the order in which they were given; the solvers
/// break ties by that order.
#[derive(Clone)]
pub struct ParityGame {
    priority: Vec<Priority>,
    owner: Vec<Player>,
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    original_id: Vec<u64>,
    label: Vec<Option<String>>,
    max_priority: Priority,
    predecessors: OnceLock<Predecessors>,
}

impl PartialEq for ParityGame {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
            && self.owner == other.owner
            && self.offsets == other.offsets
            && self.targets == other.targets
            && self.original_id == other.original_id
            && self.label == other.label
    }
}

impl Eq for ParityGame {}

impl fmt::Debug for ParityGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for v in self.vertices() {
            list.entry(&(
                self.original_id[v],
                self.priority[v],
                self.owner[v],
                self.successors(v)
                    .iter()
                    .map(|&u| self.original_id[u])
                    .collect::<Vec<_>>(),
            ));
        }
        list.finish()
    }
}

impl ParityGame {
    /// Builds a game from dense per-vertex data, validating every invariant.
    pub fn new(
        priority: Vec<Priority>,
        owner: Vec<Player>,
        successors: Vec<Vec<Vertex>>,
    ) -> Result<ParityGame, GameError> {
        let n = priority.len();
        if owner.len() != n || successors.len() != n {
            return Err(GameError::InconsistentLengths);
        }
        let ids = (0..n as u64).collect();
        let labels = vec![None; n];
        Self::from_lists(priority, owner, successors, ids, labels)
    }

    /// The empty game.
    pub fn empty() -> ParityGame {
        Self::from_raw(
            Vec::new(),
            Vec::new(),
            vec![0],
            Vec::new(),
            Vec::new(),
            Vec::new(),
        )
    }

    pub(crate) fn from_lists(
        priority: Vec<Priority>,
        owner: Vec<Player>,
        successors: Vec<Vec<Vertex>>,
        original_id: Vec<u64>,
        label: Vec<Option<String>>,
    ) -> Result<ParityGame, GameError> {
        let n = priority.len();
        if owner.len() != n || successors.len() != n || original_id.len() != n || label.len() != n {
            return Err(GameError::InconsistentLengths);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(successors.iter().map(Vec::len).sum());
        offsets.push(0);
        for succ in &successors {
            targets.extend_from_slice(succ);
            offsets.push(targets.len());
        }
        let game = Self::from_raw(priority, owner, offsets, targets, original_id, label);
        game.validate()?;
        Ok(game)
    }

    /// Assembles a game without checking it. Callers validate afterwards.
    pub(crate) fn from_raw(
        priority: Vec<Priority>,
        owner: Vec<Player>,
        offsets: Vec<usize>,
        targets: Vec<Vertex>,
        original_id: Vec<u64>,
        label: Vec<Option<String>>,
    ) -> ParityGame {
        let max_priority = priority.iter().copied().max().unwrap_or(0);
        ParityGame {
            priority,
            owner,
            offsets,
            targets,
            original_id,
            label,
            max_priority,
            predecessors: OnceLock::new(),
        }
    }

    /// Checks left-totality, edge targets and duplicate edges.
    pub fn validate(&self) -> Result<(), GameError> {
        let n = self.vertex_count();
        let mut seen = HashSet::new();
        for v in self.vertices() {
            let succ = self.successors(v);
            if succ.is_empty() {
                return Err(GameError::SinkVertex(self.original_id[v]));
            }
            seen.clear();
            for &u in succ {
                if u >= n {
                    return Err(GameError::DanglingEdge(self.original_id[v], u as u64));
                }
                if !seen.insert(u) {
                    return Err(GameError::DuplicateEdge(
                        self.original_id[v],
                        self.original_id[u],
                    ));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.priority.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.priority.is_empty()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// The highest priority in the game, `0` for the empty game.
    #[inline]
    pub fn max_priority(&self) -> Priority {
        self.max_priority
    }

    #[inline]
    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    #[inline]
    pub fn priority(&self, v: Vertex) -> Priority {
        self.priority[v]
    }

    #[inline]
    pub fn priorities(&self) -> &[Priority] {
        &self.priority
    }

    #[inline]
    pub fn owner(&self, v: Vertex) -> Player {
        self.owner[v]
    }

    #[inline]
    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    #[inline]
    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn has_edge(&self, v: Vertex, u: Vertex) -> bool {
        self.successors(v).contains(&u)
    }

    #[inline]
    pub fn original_id(&self, v: Vertex) -> u64 {
        self.original_id[v]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_id
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.label[v].as_deref()
    }

    /// Predecessors of `v`, in ascending order of the source vertex.
    pub fn predecessors(&self, v: Vertex) -> &[Vertex] {
        let preds = self.predecessors.get_or_init(|| self.build_predecessors());
        &preds.sources[preds.offsets[v]..preds.offsets[v + 1]]
    }

    fn build_predecessors(&self) -> Predecessors {
        let n = self.vertex_count();
        let mut offsets = vec![0usize; n + 1];
        for &u in &self.targets {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut sources = vec![0; self.targets.len()];
        for v in self.vertices() {
            for &u in self.successors(v) {
                sources[fill[u]] = v;
                fill[u] += 1;
            }
        }
        Predecessors { offsets, sources }
    }

    /// Looks up the dense index of an external identifier.
    pub fn vertex_by_original_id(&self, id: u64) -> Option<Vertex> {
        // Games produced by the builder have ascending ids; fall back to a scan otherwise.
        if self.original_id.windows(2).all(|w| w[0] < w[1]) {
            self.original_id.binary_search(&id).ok()
        } else {
            self.original_id.iter().position(|&x| x == id)
        }
    }

    /// Whether vertices are in nondecreasing priority order.
    pub fn is_priority_sorted(&self) -> bool {
        self.priority.windows(2).all(|w| w[0] <= w[1])
    }

    /// Returns the game with vertex `v` moved to position `map[v]`.
    ///
    /// `map` must be a permutation of `0..n`.
    pub fn permuted(&self, map: &[Vertex]) -> ParityGame {
        let n = self.vertex_count();
        assert_eq!(map.len(), n, "permutation length mismatch");
        let mut inverse = vec![0; n];
        for (v, &w) in map.iter().enumerate() {
            inverse[w] = v;
        }
        let mut priority = Vec::with_capacity(n);
        let mut owner = Vec::with_capacity(n);
        let mut original_id = Vec::with_capacity(n);
        let mut label = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(self.edge_count());
        offsets.push(0);
        for &v in &inverse {
            priority.push(self.priority[v]);
            owner.push(self.owner[v]);
            original_id.push(self.original_id[v]);
            label.push(self.label[v].clone());
            targets.extend(self.successors(v).iter().map(|&u| map[u]));
            offsets.push(targets.len());
        }
        Self::from_raw(priority, owner, offsets, targets, original_id, label)
    }

    /// The subgame induced by `keep`, listed in ascending order. Edges leaving
    /// the subgame are dropped, as are edges rejected by `keep_edge`. The
    /// result is not validated.
    pub(crate) fn induced(
        &self,
        keep: &[Vertex],
        mut keep_edge: impl FnMut(Vertex, Vertex) -> bool,
    ) -> ParityGame {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut offsets = Vec::with_capacity(keep.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &v in keep {
            for &u in self.successors(v) {
                if index[u] != usize::MAX && keep_edge(v, u) {
                    targets.push(index[u]);
                }
            }
            offsets.push(targets.len());
        }
        Self::from_raw(
            keep.iter().map(|&v| self.priority[v]).collect(),
            keep.iter().map(|&v| self.owner[v]).collect(),
            offsets,
            targets,
            keep.iter().map(|&v| self.original_id[v]).collect(),
            keep.iter().map(|&v| self.label[v].clone()).collect(),
        )
    }

    pub fn stats(&self) -> GameStats {
        let mut distinct: Vec<Priority> = self.priority.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let n = self.vertex_count();
        GameStats {
            vertices: n,
            edges: self.edge_count(),
            max_priority: self.max_priority,
            distinct_priorities: distinct.len(),
            average_outdegree: if n == 0 {
                0.0
            } else {
                self.edge_count() as f64 / n as f64
            },
        }
    }
}

/// Size summary of a game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameStats {
    pub vertices: usize,
    pub edges: usize,
    pub max_priority: Priority,
    pub distinct_priorities: usize,
    pub average_outdegree: f64,
}

impl fmt::Display for GameStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertices={} edges={} max_priority={} distinct_priorities={} avg_outdegree={:.3}",
            self.vertices,
            self.edges,
            self.max_priority,
            self.distinct_priorities,
            self.average_outdegree
        )
    }
}

/// Maps between the external vertex order and the priority-sorted internal
/// order. `forward[external] = internal`, `backward[internal] = external`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortPermutation {
    forward: Vec<Vertex>,
    backward: Vec<Vertex>,
}

impl SortPermutation {
    pub fn identity(n: usize) -> SortPermutation {
        SortPermutation {
            forward: (0..n).collect(),
            backward: (0..n).collect(),
        }
    }

    pub fn forward(&self) -> &[Vertex] {
        &self.forward
    }

    pub fn backward(&self) -> &[Vertex] {
        &self.backward
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Reverses [`sort_by_priority`] on a game.
    pub fn restore(&self, sorted: &ParityGame) -> ParityGame {
        sorted.permuted(&self.backward)
    }

    /// Re-indexes per-vertex data from internal to external order.
    pub fn to_external<T: Clone>(&self, internal: &[T]) -> Vec<T> {
        self.forward.iter().map(|&i| internal[i].clone()).collect()
    }
}

/// Stable sort of the vertices by priority. Returns the sorted game and the
/// permutation relating it to the input.
pub fn sort_by_priority(game: &ParityGame) -> (ParityGame, SortPermutation) {
    let mut backward: Vec<Vertex> = game.vertices().collect();
    backward.sort_by_key(|&v| game.priority(v));
    let mut forward = vec![0; backward.len()];
    for (internal, &external) in backward.iter().enumerate() {
        forward[external] = internal;
    }
    let sorted = game.permuted(&forward);
    (sorted, SortPermutation { forward, backward })
}

/// How a [`GameBuilder`] treats repeated edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicateEdges {
    #[default]
    Reject,
    /// Keep the first occurrence and log a warning.
    Dedup,
}

/// Collects vertices with sparse external identifiers and produces a game
/// with dense indices assigned in ascending identifier order.
#[derive(Debug, Default)]
pub struct GameBuilder {
    records: BTreeMap<u64, Record>,
    duplicates: DuplicateEdges,
}

#[derive(Debug)]
struct Record {
    priority: Priority,
    owner: Player,
    successors: Vec<u64>,
    label: Option<String>,
}

impl GameBuilder {
    pub fn new() -> GameBuilder {
        GameBuilder::default()
    }

    pub fn duplicate_edges(mut self, policy: DuplicateEdges) -> GameBuilder {
        self.duplicates = policy;
        self
    }

    pub fn add_vertex(
        &mut self,
        id: u64,
        priority: Priority,
        owner: Player,
        successors: Vec<u64>,
        label: Option<String>,
    ) -> Result<(), GameError> {
        if self.records.contains_key(&id) {
            return Err(GameError::DuplicateVertexId(id));
        }
        self.records.insert(
            id,
            Record {
                priority,
                owner,
                successors,
                label,
            },
        );
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn build(self) -> Result<ParityGame, GameError> {
        let index: BTreeMap<u64, Vertex> = self
            .records
            .keys()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect();
        let n = self.records.len();
        let mut priority = Vec::with_capacity(n);
        let mut owner = Vec::with_capacity(n);
        let mut successors = Vec::with_capacity(n);
        let mut original_id = Vec::with_capacity(n);
        let mut label = Vec::with_capacity(n);
        for (id, record) in self.records {
            let mut succ = Vec::with_capacity(record.successors.len());
            for target in record.successors {
                let Some(&u) = index.get(&target) else {
                    return Err(GameError::DanglingEdge(id, target));
                };
                if succ.contains(&u) {
                    match self.duplicates {
                        DuplicateEdges::Reject => return Err(GameError::DuplicateEdge(id, target)),
                        DuplicateEdges::Dedup => {
                            log::warn!("dropping duplicate edge {id} -> {target}");
                            continue;
                        }
                    }
                }
                succ.push(u);
            }
            priority.push(record.priority);
            owner.push(record.owner);
            successors.push(succ);
            original_id.push(id);
            label.push(record.label);
        }
        ParityGame::from_lists(priority, owner, successors, original_id, label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn player_encoding() {
        assert_eq!(Player::Even as u8, 0);
        assert_eq!(Player::Odd as u8, 1);
        for p in [Player::Even, Player::Odd] {
            assert_eq!(p.opponent().opponent(), p);
        }
        assert_eq!(Player::of_priority(4), Player::Even);
        assert_eq!(Player::of_priority(7), Player::Odd);
    }

    #[test]
    fn validate_examples() {
        assert_eq!(ParityGame::empty().validate(), Ok(()));
        assert_eq!(fixtures::g1().validate(), Ok(()));
        assert_eq!(
            ParityGame::new(vec![0], vec![Player::Even], vec![vec![]]),
            Err(GameError::SinkVertex(0))
        );
        assert_eq!(
            ParityGame::new(vec![0], vec![Player::Even], vec![vec![3]]),
            Err(GameError::DanglingEdge(0, 3))
        );
        assert_eq!(
            ParityGame::new(vec![0, 1], vec![Player::Even; 2], vec![vec![1, 1], vec![0]]),
            Err(GameError::DuplicateEdge(0, 1))
        );
    }

    #[test]
    fn sort_three_vertices() {
        let game = ParityGame::new(
            vec![2, 0, 1],
            vec![Player::Even, Player::Odd, Player::Even],
            vec![vec![1], vec![2], vec![0]],
        )
        .unwrap();
        let (sorted, perm) = sort_by_priority(&game);
        assert_eq!(sorted.priorities(), &[0, 1, 2]);
        assert_eq!(perm.forward(), &[2, 0, 1]);
        assert_eq!(perm.backward(), &[1, 2, 0]);
        // edge 0 -> 1 becomes 2 -> 0
        assert_eq!(sorted.successors(2), &[0]);
        assert_eq!(perm.restore(&sorted), game);
    }

    #[test]
    fn sort_is_stable_and_identity_on_sorted_input() {
        let game = ParityGame::new(
            vec![1, 1, 3, 3],
            vec![Player::Even; 4],
            vec![vec![1], vec![2], vec![3], vec![0]],
        )
        .unwrap();
        let (sorted, perm) = sort_by_priority(&game);
        assert!(perm.is_identity());
        assert_eq!(sorted, game);
    }

    #[test]
    fn sort_g2() {
        let (sorted, perm) = sort_by_priority(&fixtures::g2());
        assert_eq!(sorted.priorities(), &[1, 2, 3, 4, 5, 16, 17, 18]);
        assert!(sorted.is_priority_sorted());
        assert_eq!(perm.restore(&sorted), fixtures::g2());
    }

    #[test]
    fn stats_examples() {
        let s = fixtures::g1().stats();
        assert_eq!((s.vertices, s.edges, s.max_priority), (2, 3, 2));
        assert_eq!(s.average_outdegree, 1.5);
        let s = fixtures::g2().stats();
        assert_eq!((s.vertices, s.edges, s.max_priority), (8, 12, 18));
        let s = ParityGame::empty().stats();
        assert_eq!((s.vertices, s.edges, s.max_priority), (0, 0, 0));
    }

    #[test]
    fn builder_sparse_ids() {
        let mut b = GameBuilder::new();
        b.add_vertex(10, 1, Player::Odd, vec![3], None).unwrap();
        b.add_vertex(3, 2, Player::Even, vec![10, 3], Some("x".into()))
            .unwrap();
        assert_eq!(
            b.add_vertex(3, 0, Player::Even, vec![3], None),
            Err(GameError::DuplicateVertexId(3))
        );
        let g = b.build().unwrap();
        assert_eq!(g.original_ids(), &[3, 10]);
        assert_eq!(g.successors(0), &[1, 0]);
        assert_eq!(g.label(0), Some("x"));
        assert_eq!(g.vertex_by_original_id(10), Some(1));
    }

    #[test]
    fn builder_dedup_policy() {
        let mut b = GameBuilder::new().duplicate_edges(DuplicateEdges::Dedup);
        b.add_vertex(0, 0, Player::Even, vec![0, 0], None).unwrap();
        assert_eq!(b.build().unwrap().successors(0), &[0]);

        let mut b = GameBuilder::new();
        b.add_vertex(0, 0, Player::Even, vec![0, 0], None).unwrap();
        assert_eq!(b.build(), Err(GameError::DuplicateEdge(0, 0)));
    }

    #[test]
    fn predecessors_match_edges() {
        let g = fixtures::g2();
        for v in g.vertices() {
            for &u in g.successors(v) {
                assert!(g.predecessors(u).contains(&v));
            }
        }
        let total: usize = g.vertices().map(|v| g.predecessors(v).len()).sum();
        assert_eq!(total, g.edge_count());
    }
}
