use crate::game::{ParityGame, Player, SortPermutation};
use crate::Vertex;

/// Winning regions together with positional strategies for both players.
///
/// `strategy[v]` is set exactly for the vertices whose owner wins them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<Vertex>>,
}

/// Problems found by [`Solution::check_well_formed`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolutionError {
    #[error("solution covers {actual} vertices, game has {expected}")]
    WrongLength { expected: usize, actual: usize },
    #[error("vertex {0} is won by its owner but has no strategy")]
    MissingStrategy(Vertex),
    #[error("vertex {0} is lost by its owner but has a strategy")]
    UnexpectedStrategy(Vertex),
    #[error("strategy of vertex {0} moves to {1}, which is not a successor")]
    NotAnEdge(Vertex, Vertex),
    #[error("strategy of vertex {0} moves to {1}, which is won by the other player")]
    LeavesRegion(Vertex, Vertex),
}

impl Solution {
    pub fn empty() -> Solution {
        Solution {
            winner: Vec::new(),
            strategy: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.winner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winner.is_empty()
    }

    pub fn region(&self, player: Player) -> Vec<Vertex> {
        (0..self.winner.len())
            .filter(|&v| self.winner[v] == player)
            .collect()
    }

    /// Checks the local invariants: strategies exist exactly where the owner
    /// wins, follow an edge, and stay in the owner's region. Says nothing
    /// about whether the regions are actually won.
    pub fn check_well_formed(&self, game: &ParityGame) -> Result<(), SolutionError> {
        let n = game.vertex_count();
        if self.winner.len() != n || self.strategy.len() != n {
            return Err(SolutionError::WrongLength {
                expected: n,
                actual: self.winner.len().min(self.strategy.len()),
            });
        }
        for v in game.vertices() {
            let owned = game.owner(v) == self.winner[v];
            match (owned, self.strategy[v]) {
                (true, None) => return Err(SolutionError::MissingStrategy(v)),
                (false, Some(_)) => return Err(SolutionError::UnexpectedStrategy(v)),
                (true, Some(u)) => {
                    if !game.has_edge(v, u) {
                        return Err(SolutionError::NotAnEdge(v, u));
                    }
                    if self.winner[u] != self.winner[v] {
                        return Err(SolutionError::LeavesRegion(v, u));
                    }
                }
                (false, None) => {}
            }
        }
        Ok(())
    }

    /// Translates a solution of the priority-sorted game back to the
    /// external vertex order.
    pub fn to_external(&self, perm: &SortPermutation) -> Solution {
        let backward = perm.backward();
        Solution {
            winner: perm.to_external(&self.winner),
            strategy: perm
                .to_external(&self.strategy)
                .into_iter()
                .map(|s| s.map(|u| backward[u]))
                .collect(),
        }
    }
}
