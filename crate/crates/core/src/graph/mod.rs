//! Attractors and strongly connected components over (sub)games.

mod attractor;
mod scc;

pub use attractor::{attract, attract_filtered, Attractor};
pub use scc::{sccs, strongly_connected, Component, SccFinder};

use crate::Vertex;

/// A subgame given by a vertex mask. Edges are those of the game with both
/// endpoints alive; a restriction need not be left-total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    alive: Vec<bool>,
}

impl Restriction {
    pub fn full(n: usize) -> Restriction {
        Restriction {
            alive: vec![true; n],
        }
    }

    pub fn none(n: usize) -> Restriction {
        Restriction {
            alive: vec![false; n],
        }
    }

    pub fn from_mask(alive: Vec<bool>) -> Restriction {
        Restriction { alive }
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = Vertex>) -> Restriction {
        let mut r = Restriction::none(n);
        for v in vertices {
            r.alive[v] = true;
        }
        r
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.alive[v]
    }

    pub fn insert(&mut self, v: Vertex) {
        self.alive[v] = true;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.alive[v] = false;
    }

    /// Size of the underlying game.
    pub fn universe(&self) -> usize {
        self.alive.len()
    }

    pub fn count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.alive.iter().any(|&a| a)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter_map(|(v, &a)| a.then_some(v))
    }

    pub fn mask(&self) -> &[bool] {
        &self.alive
    }
}
