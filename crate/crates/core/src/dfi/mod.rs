//! Distraction fixpoint iteration.
//!
//! The solver keeps one flag per vertex marking it as a *distraction*: a
//! vertex that is won by the opponent of the player matching its priority.
//! Starting from no distractions, priority levels are evaluated from low to
//! high. At each level the one-step estimate may flag new distractions;
//! whenever that happens the estimates of all lower levels are discarded and
//! evaluation restarts at the bottom. When the highest level is stable, the
//! flags determine both winning regions.
//!
//! In [`Mode::Freezing`], vertices below the changed level that are already
//! won by the opponent of that level's player are frozen instead of reset.
//! Frozen vertices keep their flag and their strategy choice and are skipped
//! until the level that froze them is stable again. The choices recorded this
//! way form winning strategies for both players.
//!
//! Both modes expect a priority-sorted game (see
//! [`sort_by_priority`](crate::game::sort_by_priority)); [`solve_game`]
//! handles the sorting for arbitrary games.

mod observer;
mod state;

use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use observer::{Observer, Silent, Trace, TraceEvent};
pub use state::{onestep, winner_of, DistractionState, Flags};

use crate::deadline::{Deadline, TimedOut};
use crate::game::{sort_by_priority, ParityGame, Player};
use crate::solution::Solution;
use crate::{Priority, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Regions only, resetting all lower levels on every change.
    Basic,
    /// Freezes lower vertices won by the opponent and records strategies.
    #[default]
    Freezing,
}

/// How new distractions found during one pass over a level become visible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PassSemantics {
    /// Every vertex of the level is evaluated against the flags as they were
    /// at the start of the pass; updates are applied afterwards.
    #[default]
    Snapshot,
    /// Updates are applied immediately and seen by later vertices of the
    /// same pass. Single-threaded only.
    InPlace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub mode: Mode,
    pub pass_semantics: PassSemantics,
    /// Threads used to evaluate a level. Only meaningful with snapshot passes.
    pub workers: usize,
    /// Checked once per pass.
    pub deadline: Deadline,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            mode: Mode::Freezing,
            pass_semantics: PassSemantics::Snapshot,
            workers: 1,
            deadline: Deadline::NEVER,
        }
    }
}

impl SolverOptions {
    pub fn basic() -> Self {
        SolverOptions {
            mode: Mode::Basic,
            ..Default::default()
        }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        SolverOptions { workers, ..self }
    }

    pub fn with_semantics(self, pass_semantics: PassSemantics) -> Self {
        SolverOptions {
            pass_semantics,
            ..self
        }
    }

    pub fn with_deadline(self, deadline: Deadline) -> Self {
        SolverOptions { deadline, ..self }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.workers == 0 {
            return Err(SolveError::InvalidOptions(
                "at least one worker is required",
            ));
        }
        if self.workers > 1 && self.pass_semantics == PassSemantics::InPlace {
            return Err(SolveError::InvalidOptions(
                "in-place passes cannot use more than one worker",
            ));
        }
        Ok(())
    }
}

/// Solver counters.
///
/// `passes` counts level evaluations, `distraction_additions` the flags set
/// by them, `resets` the restarts after a level changed, and `freezes` the
/// individual vertices frozen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub passes: u64,
    pub distraction_additions: u64,
    pub resets: u64,
    pub freezes: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("game vertices are not sorted by priority")]
    NotPrioritySorted,
    #[error("invalid solver options: {0}")]
    InvalidOptions(&'static str),
    #[error("could not start worker threads: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

/// Result of one run.
#[derive(Debug, Clone)]
pub struct DfiRun {
    pub winner: Vec<Player>,
    /// Present in freezing mode: the recorded choice for every vertex won by
    /// its owner.
    pub strategy: Option<Vec<Option<Vertex>>>,
    /// Final distraction flags.
    pub distractions: Flags,
    pub stats: SolverStats,
    /// Heap bytes held by the solver's working state at the end of the run.
    pub working_state_bytes: usize,
}

impl DfiRun {
    pub fn into_solution(self) -> Option<Solution> {
        let winner = self.winner;
        self.strategy.map(|strategy| Solution { winner, strategy })
    }

    pub fn solution(&self) -> Option<Solution> {
        self.strategy.as_ref().map(|strategy| Solution {
            winner: self.winner.clone(),
            strategy: strategy.clone(),
        })
    }
}

/// Regions of a priority-sorted game by the basic algorithm.
pub fn solve_basic(game: &ParityGame) -> Result<DfiRun, SolveError> {
    solve(game, &SolverOptions::basic())
}

/// Solves a priority-sorted game.
pub fn solve(game: &ParityGame, options: &SolverOptions) -> Result<DfiRun, SolveError> {
    solve_observed(game, options, &mut Silent)
}

/// Solves a game in any vertex order by sorting it first. Results are in
/// the input order.
pub fn solve_game(game: &ParityGame, options: &SolverOptions) -> Result<DfiRun, SolveError> {
    if game.is_priority_sorted() {
        return solve(game, options);
    }
    let (sorted, perm) = sort_by_priority(game);
    let run = solve(&sorted, options)?;
    let backward = perm.backward();
    Ok(DfiRun {
        winner: perm.to_external(&run.winner),
        strategy: run.strategy.map(|s| {
            perm.to_external(&s)
                .into_iter()
                .map(|c| c.map(|u| backward[u]))
                .collect()
        }),
        distractions: perm
            .forward()
            .iter()
            .map(|&i| run.distractions[i])
            .collect(),
        stats: run.stats,
        working_state_bytes: run.working_state_bytes,
    })
}

/// Solves a priority-sorted game, reporting every state update to `observer`.
pub fn solve_observed<O: Observer>(
    game: &ParityGame,
    options: &SolverOptions,
    observer: &mut O,
) -> Result<DfiRun, SolveError> {
    options.validate()?;
    if !game.is_priority_sorted() {
        return Err(SolveError::NotPrioritySorted);
    }
    let start = Instant::now();
    let pool = if options.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(options.workers)
                .build()
                .map_err(|e| SolveError::ThreadPool(e.to_string()))?,
        )
    } else {
        None
    };
    let mut solver = Solver {
        game,
        levels: levels(game),
        state: DistractionState::new(
            game.vertex_count(),
            game.max_priority(),
            options.mode == Mode::Freezing,
        ),
        options,
        pool,
        stats: SolverStats::default(),
        pending: Flags::new(),
        chunk: PARALLEL_CHUNK * options.workers,
        chunk_results: Vec::new(),
    };
    solver.run(observer)?;

    let working_state_bytes = solver.allocated_bytes();
    let Solver {
        state, mut stats, ..
    } = solver;
    let winner: Vec<Player> = game
        .vertices()
        .map(|v| winner_of(game, &state.distractions, v))
        .collect();
    let strategy = (options.mode == Mode::Freezing).then(|| {
        game.vertices()
            .map(|v| {
                if game.owner(v) == winner[v] {
                    state.choice(v)
                } else {
                    None
                }
            })
            .collect()
    });
    stats.wall_time = start.elapsed();
    Ok(DfiRun {
        winner,
        strategy,
        distractions: state.distractions,
        stats,
        working_state_bytes,
    })
}

/// A maximal run of vertices sharing one priority in a sorted game.
#[derive(Debug, Clone, Copy)]
struct Level {
    priority: Priority,
    start: Vertex,
    end: Vertex,
}

fn levels(game: &ParityGame) -> Vec<Level> {
    let mut out: Vec<Level> = Vec::new();
    for v in game.vertices() {
        let p = game.priority(v);
        match out.last_mut() {
            Some(level) if level.priority == p => level.end = v + 1,
            _ => out.push(Level {
                priority: p,
                start: v,
                end: v + 1,
            }),
        }
    }
    out
}

/// Vertices per worker in one parallel chunk. Chunks bound the scratch
/// memory of parallel passes independently of the level size.
const PARALLEL_CHUNK: usize = 4096;

/// Levels smaller than this are evaluated on the calling thread.
const PARALLEL_MIN_LEVEL: usize = 2048;

struct Solver<'a> {
    game: &'a ParityGame,
    levels: Vec<Level>,
    state: DistractionState,
    options: &'a SolverOptions,
    pool: Option<rayon::ThreadPool>,
    stats: SolverStats,
    /// Distractions found by the current snapshot pass, indexed from the
    /// start of the level.
    pending: Flags,
    /// Vertices per parallel chunk, and the results of the current chunk.
    chunk: usize,
    chunk_results: Vec<Option<(Player, Option<Vertex>)>>,
}

/// Whether `v` is evaluated: not already a distraction and not frozen.
#[inline]
fn eligible(state: &DistractionState, v: Vertex) -> bool {
    !state.distractions[v] && state.frozen_at(v).is_none()
}

impl Solver<'_> {
    fn run<O: Observer>(&mut self, observer: &mut O) -> Result<(), SolveError> {
        let mut index = 0;
        while index < self.levels.len() {
            self.options.deadline.check()?;
            let level = self.levels[index];
            self.state.cursor = level.priority;
            observer.level_started(level.priority, &self.state);
            self.stats.passes += 1;
            let changed = match self.options.pass_semantics {
                PassSemantics::Snapshot => self.snapshot_pass(level, observer),
                PassSemantics::InPlace => self.in_place_pass(level, observer),
            };
            observer.level_finished(level.priority, changed);
            if changed {
                self.stats.resets += 1;
                self.restart_below(level, observer);
                index = 0;
            } else {
                if self.options.mode == Mode::Freezing {
                    self.thaw_below(level, observer);
                }
                index += 1;
            }
        }
        Ok(())
    }

    /// Heap bytes held by the solver: flags, freeze levels, choices and
    /// pass scratch.
    fn allocated_bytes(&self) -> usize {
        self.state.allocated_bytes()
            + self.pending.capacity() / 8
            + self.chunk_results.capacity()
                * std::mem::size_of::<Option<(Player, Option<Vertex>)>>()
            + self.levels.capacity() * std::mem::size_of::<Level>()
    }

    /// Evaluates the level against the flags as they were when the pass
    /// began: new distractions are staged in `pending` and applied at the end.
    fn snapshot_pass<O: Observer>(&mut self, level: Level, observer: &mut O) -> bool {
        let width = level.end - level.start;
        self.pending.clear();
        self.pending.resize(width, false);
        // Small levels run sequentially; the pool is handed back afterwards.
        let pool = if width >= PARALLEL_MIN_LEVEL {
            self.pool.take()
        } else {
            None
        };
        let mut start = level.start;
        while start < level.end {
            let end = match &pool {
                Some(_) => (start + self.chunk).min(level.end),
                None => level.end,
            };
            match &pool {
                Some(pool) => {
                    let mut chunk = std::mem::take(&mut self.chunk_results);
                    chunk.clear();
                    {
                        let game = self.game;
                        let state = &self.state;
                        pool.install(|| {
                            chunk.par_extend((start..end).into_par_iter().with_min_len(1024).map(
                                |v| {
                                    eligible(state, v)
                                        .then(|| onestep(game, &state.distractions, v))
                                },
                            ))
                        });
                    }
                    for (v, result) in (start..end).zip(chunk.iter()) {
                        if let Some((winner, choice)) = *result {
                            self.record(level, v, winner, choice, observer);
                        }
                    }
                    self.chunk_results = chunk;
                }
                None => {
                    for v in start..end {
                        if eligible(&self.state, v) {
                            let (winner, choice) = onestep(self.game, &self.state.distractions, v);
                            self.record(level, v, winner, choice, observer);
                        }
                    }
                }
            }
            start = end;
        }
        if let Some(pool) = pool {
            self.pool = Some(pool);
        }
        let mut changed = false;
        for i in self.pending.iter_ones() {
            let v = level.start + i;
            observer.distraction_added(v, level.priority);
            self.state.distractions.set(v, true);
            self.stats.distraction_additions += 1;
            changed = true;
        }
        changed
    }

    #[inline]
    fn record<O: Observer>(
        &mut self,
        level: Level,
        v: Vertex,
        winner: Player,
        choice: Option<Vertex>,
        observer: &mut O,
    ) {
        observer.evaluated(v, winner, choice, &self.state);
        if self.options.mode == Mode::Freezing {
            self.state.set_choice(v, choice);
        }
        if winner != Player::of_priority(level.priority) {
            self.pending.set(v - level.start, true);
        }
    }

    fn in_place_pass<O: Observer>(&mut self, level: Level, observer: &mut O) -> bool {
        let parity = Player::of_priority(level.priority);
        let track_choice = self.options.mode == Mode::Freezing;
        let mut changed = false;
        for v in level.start..level.end {
            if !eligible(&self.state, v) {
                continue;
            }
            let (winner, choice) = onestep(self.game, &self.state.distractions, v);
            observer.evaluated(v, winner, choice, &self.state);
            if track_choice {
                self.state.set_choice(v, choice);
            }
            if winner != parity {
                observer.distraction_added(v, level.priority);
                self.state.distractions.set(v, true);
                self.stats.distraction_additions += 1;
                changed = true;
            }
        }
        changed
    }

    /// After a change at `level`: reset every lower vertex, or in freezing
    /// mode freeze those currently won by the opponent of the level's player.
    fn restart_below<O: Observer>(&mut self, level: Level, observer: &mut O) {
        let opponent = Player::of_priority(level.priority).opponent();
        let freezing = self.options.mode == Mode::Freezing;
        for v in 0..level.start {
            if freezing {
                if self.state.frozen_at(v).is_some() {
                    continue;
                }
                if winner_of(self.game, &self.state.distractions, v) == opponent {
                    observer.frozen(v, level.priority, &self.state);
                    self.state.set_frozen(v, Some(level.priority));
                    self.stats.freezes += 1;
                    continue;
                }
            }
            if self.state.distractions[v] {
                observer.reset(v, level.priority);
                self.state.distractions.set(v, false);
            }
        }
    }

    fn thaw_below<O: Observer>(&mut self, level: Level, observer: &mut O) {
        for v in 0..level.start {
            if self.state.frozen_at(v) == Some(level.priority) {
                observer.thawed(v, level.priority, &self.state);
                self.state.set_frozen(v, None);
            }
        }
    }
}
