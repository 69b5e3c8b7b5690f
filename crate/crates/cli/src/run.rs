//! Running one solver on one game, with optional preprocessing.

use std::time::{Duration, Instant};

use clap::ValueEnum;
use paritydfi::dfi::{self, PassSemantics, SolveError, SolverOptions, SolverStats};
use paritydfi::fixpoint::{bfl_win0_until, FixpointError, DEFAULT_BUDGET};
use paritydfi::preprocess::preprocess;
use paritydfi::zielonka::{solve_zielonka_with, ZielonkaError};
use paritydfi::{Deadline, ParityGame, Player, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverKind {
    /// Distraction fixpoint iteration with freezing; regions and strategies.
    Dfi,
    /// Distraction fixpoint iteration without freezing; regions only.
    DfiBasic,
    /// Zielonka's recursive algorithm; regions and strategies.
    Zlk,
    /// Nested fixpoint evaluation; regions only, small games.
    Bfl,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Dfi => "dfi",
            SolverKind::DfiBasic => "dfi-basic",
            SolverKind::Zlk => "zlk",
            SolverKind::Bfl => "bfl",
        }
    }

    pub fn has_strategies(self) -> bool {
        matches!(self, SolverKind::Dfi | SolverKind::Zlk)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub solver: SolverKind,
    pub preprocess: bool,
    pub workers: usize,
    pub in_place: bool,
    pub deadline: Deadline,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub winner: Vec<Player>,
    /// Present for solvers that compute strategies.
    pub strategy: Option<Vec<Option<usize>>>,
    /// Counters of the distraction solvers.
    pub stats: Option<SolverStats>,
    /// Vertices decided by preprocessing.
    pub decided: usize,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn solution(&self) -> Option<Solution> {
        self.strategy.as_ref().map(|strategy| Solution {
            winner: self.winner.clone(),
            strategy: strategy.clone(),
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("timed out")]
    TimedOut,
    #[error("{0}")]
    Failed(String),
}

impl From<SolveError> for RunError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::TimedOut(_) => RunError::TimedOut,
            other => RunError::Failed(other.to_string()),
        }
    }
}

impl From<ZielonkaError> for RunError {
    fn from(e: ZielonkaError) -> Self {
        match e {
            ZielonkaError::TimedOut(_) => RunError::TimedOut,
            other => RunError::Failed(other.to_string()),
        }
    }
}

impl From<FixpointError> for RunError {
    fn from(e: FixpointError) -> Self {
        match e {
            FixpointError::TimedOut(_) => RunError::TimedOut,
            other => RunError::Failed(other.to_string()),
        }
    }
}

struct Partial {
    winner: Vec<Player>,
    strategy: Option<Vec<Option<usize>>>,
    stats: Option<SolverStats>,
}

fn solve_directly(game: &ParityGame, options: &RunOptions) -> Result<Partial, RunError> {
    match options.solver {
        SolverKind::Dfi | SolverKind::DfiBasic => {
            let base = if options.solver == SolverKind::Dfi {
                SolverOptions::default()
            } else {
                SolverOptions::basic()
            };
            let semantics = if options.in_place {
                PassSemantics::InPlace
            } else {
                PassSemantics::Snapshot
            };
            let dfi_options = base
                .with_workers(options.workers)
                .with_semantics(semantics)
                .with_deadline(options.deadline);
            let run = dfi::solve_game(game, &dfi_options)?;
            Ok(Partial {
                winner: run.winner,
                strategy: run.strategy,
                stats: Some(run.stats),
            })
        }
        SolverKind::Zlk => {
            let limit = game.vertex_count() + game.max_priority() as usize + 8;
            let sol = solve_zielonka_with(game, limit, options.deadline)?;
            Ok(Partial {
                winner: sol.winner,
                strategy: Some(sol.strategy),
                stats: None,
            })
        }
        SolverKind::Bfl => {
            let win0 = bfl_win0_until(game, DEFAULT_BUDGET, options.deadline)?;
            Ok(Partial {
                winner: game
                    .vertices()
                    .map(|v| Player::from_bit(!win0.contains(v)))
                    .collect(),
                strategy: None,
                stats: None,
            })
        }
    }
}

pub fn run(game: &ParityGame, options: &RunOptions) -> Result<Outcome, RunError> {
    let start = Instant::now();
    if !options.preprocess {
        let p = solve_directly(game, options)?;
        return Ok(Outcome {
            winner: p.winner,
            strategy: p.strategy,
            stats: p.stats,
            decided: 0,
            elapsed: start.elapsed(),
        });
    }
    let reduced = preprocess(game);
    let p = solve_directly(&reduced.game, options)?;
    let (winner, strategy) = match p.strategy {
        Some(strategy) => {
            let sol = reduced.compose(&Solution {
                winner: p.winner,
                strategy,
            });
            (sol.winner, Some(sol.strategy))
        }
        None => (reduced.compose_regions(&p.winner), None),
    };
    Ok(Outcome {
        winner,
        strategy,
        stats: p.stats,
        decided: reduced.partial.decided_count(),
        elapsed: start.elapsed(),
    })
}
