use std::collections::VecDeque;

use super::Restriction;
use crate::game::{ParityGame, Player};
use crate::Vertex;

/// The attractor of a target set together with an attractor strategy.
#[derive(Debug, Clone)]
pub struct Attractor {
    /// Members in the order they were added, targets first.
    pub members: Vec<Vertex>,
    /// Membership mask over the whole game.
    pub contains: Vec<bool>,
    /// For attracting-player vertices of the attractor: a successor inside
    /// it. Vertices added by the search move strictly closer to the targets.
    pub strategy: Vec<Option<Vertex>>,
}

impl Attractor {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All vertices of `within` from which `player` can force the play into
/// `targets`, by backward search with per-vertex successor counters.
pub fn attract(
    game: &ParityGame,
    within: &Restriction,
    player: Player,
    targets: &[Vertex],
) -> Attractor {
    attract_filtered(game, within, player, targets, |_, _| true)
}

/// Like [`attract`], but ignores edges `(v, u)` rejected by `keep_edge`.
pub fn attract_filtered(
    game: &ParityGame,
    within: &Restriction,
    player: Player,
    targets: &[Vertex],
    keep_edge: impl Fn(Vertex, Vertex) -> bool,
) -> Attractor {
    let n = game.vertex_count();
    let mut contains = vec![false; n];
    let mut strategy = vec![None; n];
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    for &t in targets {
        debug_assert!(within.contains(t), "target {t} outside the restriction");
        if !contains[t] {
            contains[t] = true;
            members.push(t);
            queue.push_back(t);
        }
    }
    // Remaining escape counts for opponent vertices, computed on first touch.
    let mut remaining: Vec<u32> = vec![u32::MAX; n];
    while let Some(u) = queue.pop_front() {
        for &w in game.predecessors(u) {
            if contains[w] || !within.contains(w) || !keep_edge(w, u) {
                continue;
            }
            if game.owner(w) == player {
                strategy[w] = game
                    .successors(w)
                    .iter()
                    .copied()
                    .find(|&x| contains[x] && keep_edge(w, x));
            } else {
                if remaining[w] == u32::MAX {
                    remaining[w] = game
                        .successors(w)
                        .iter()
                        .filter(|&&x| within.contains(x) && keep_edge(w, x))
                        .count() as u32;
                }
                remaining[w] -= 1;
                if remaining[w] > 0 {
                    continue;
                }
            }
            contains[w] = true;
            members.push(w);
            queue.push_back(w);
        }
    }
    for &t in targets {
        if game.owner(t) == player && strategy[t].is_none() {
            strategy[t] = game
                .successors(t)
                .iter()
                .copied()
                .find(|&x| contains[x] && keep_edge(t, x));
        }
    }
    Attractor {
        members,
        contains,
        strategy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(game: &ParityGame, vs: &[Vertex]) -> Vec<u64> {
        let mut out: Vec<u64> = vs.iter().map(|&v| game.original_id(v)).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn empty_target() {
        let g = fixtures::g2();
        let a = attract(&g, &Restriction::full(8), Player::Even, &[]);
        assert!(a.is_empty());
        assert!(a.strategy.iter().all(Option::is_none));
    }

    #[test]
    fn nothing_attracted_to_17_for_odd() {
        let g = fixtures::g2();
        let v17 = g.vertex_by_original_id(17).unwrap();
        let a = attract(&g, &Restriction::full(8), Player::Odd, &[v17]);
        assert_eq!(ids(&g, &a.members), vec![17]);
        assert!(a.strategy.iter().all(Option::is_none));
    }

    #[test]
    fn even_attractor_of_16() {
        // Pinned by the brute-force fixpoint in tests/graph_algos.rs: in the
        // full game every vertex is attracted, the chain closing via 17 -> 2.
        let g = fixtures::g2();
        let id = |x| g.vertex_by_original_id(x).unwrap();
        let a = attract(&g, &Restriction::full(8), Player::Even, &[id(16)]);
        assert_eq!(ids(&g, &a.members), vec![1, 2, 3, 4, 5, 16, 17, 18]);
        assert_eq!(a.strategy[id(3)], Some(id(16)));
        assert_eq!(a.strategy[id(2)], Some(id(16)));
        assert_eq!(a.strategy[id(18)], Some(id(3)));
        assert_eq!(a.strategy[id(17)], Some(id(2)));
        assert_eq!(a.strategy[id(4)], Some(id(17)));
        assert_eq!(a.strategy[id(5)], Some(id(4)));
        assert_eq!(a.strategy[id(1)], None);
        // target with a successor inside the result
        assert_eq!(a.strategy[id(16)], Some(id(5)));
    }

    #[test]
    fn even_attractor_of_16_without_17_and_18() {
        let g = fixtures::g2();
        let id = |x| g.vertex_by_original_id(x).unwrap();
        let mut r = Restriction::full(8);
        r.remove(id(17));
        r.remove(id(18));
        let a = attract(&g, &r, Player::Even, &[id(16)]);
        assert_eq!(ids(&g, &a.members), vec![1, 2, 3, 16]);
    }

    #[test]
    fn restriction_limits_escapes() {
        // Odd vertex 0 with successors 1 and 2; with 2 removed it is forced to 1.
        let g = ParityGame::new(
            vec![0, 0, 0],
            vec![Player::Odd, Player::Even, Player::Even],
            vec![vec![1, 2], vec![1], vec![2]],
        )
        .unwrap();
        let a = attract(&g, &Restriction::full(3), Player::Even, &[1]);
        assert_eq!(a.members, vec![1]);
        let r = Restriction::from_vertices(3, [0, 1]);
        let a = attract(&g, &r, Player::Even, &[1]);
        assert_eq!(a.members, vec![1, 0]);
    }
}
