//! Parity game solving by distraction fixpoint iteration.
//!
//! The main entry point is [`dfi::solve_game`]. Alongside it the crate ships
//! the pieces needed to trust its answers: Zielonka's algorithm and a literal
//! mu-calculus fixpoint evaluation as reference solvers, an independent
//! strategy [`verify`]er, a seeded game [`generate`]or, and sound
//! [`preprocess`]ing reductions.
//!
//! Vertices are dense indices `0..n`. Games read from files keep their
//! original ids, which all output formats use.

pub mod deadline;
pub mod dfi;
pub mod fixpoint;
pub mod fixtures;
pub mod format;
pub mod game;
pub mod generate;
pub mod graph;
pub mod packed;
pub mod preprocess;
pub mod solution;
pub mod verify;
pub mod zielonka;

pub type Vertex = usize;
pub type Priority = u32;

pub use deadline::{Deadline, TimedOut};
pub use game::{sort_by_priority, GameBuilder, GameError, ParityGame, Player, SortPermutation};
pub use solution::{Solution, SolutionError};
