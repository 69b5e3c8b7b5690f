//! Benchmark harness: every game of a directory with every solver, with and
//! without preprocessing, as CSV.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use paritydfi::format::{read_pgsolver, ParseOptions};
use paritydfi::{Deadline, ParityGame};
use rayon::prelude::*;
use serde::Serialize;

use crate::run::{run, RunError, RunOptions, SolverKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchOutcome {
    Solved,
    Timeout,
    Error,
}

/// One CSV row. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub game: String,
    pub solver: &'static str,
    pub preprocess: bool,
    /// Mean wall time over the repetitions; the timeout on a timeout.
    pub time_s: Option<f64>,
    pub outcome: BenchOutcome,
    pub n: Option<usize>,
    pub edges: Option<usize>,
    pub d: Option<u32>,
    pub passes: Option<u64>,
    pub additions: Option<u64>,
    pub resets: Option<u64>,
    pub freezes: Option<u64>,
}

/// Which preprocessing settings each solver runs under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PreprocessModes {
    Both,
    On,
    Off,
}

impl PreprocessModes {
    fn settings(self) -> &'static [bool] {
        match self {
            PreprocessModes::Both => &[true, false],
            PreprocessModes::On => &[true],
            PreprocessModes::Off => &[false],
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub solvers: Vec<SolverKind>,
    pub preprocess: PreprocessModes,
    pub timeout: Duration,
    pub repetitions: usize,
    pub workers: usize,
    pub parallel_games: usize,
}

/// Regular files of `dir`, sorted by name.
pub fn game_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        if entry.file_type()?.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

fn load(path: &Path) -> Result<ParityGame, String> {
    let file = File::open(path).map_err(|e| e.to_string())?;
    read_pgsolver(BufReader::new(file), ParseOptions::default()).map_err(|e| e.to_string())
}

fn bench_game(path: &Path, config: &BenchConfig) -> Vec<BenchRecord> {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let game = load(path);
    if let Err(e) = &game {
        log::warn!("{}: {e}", path.display());
    }
    let mut rows = Vec::new();
    for &solver in &config.solvers {
        for &preprocess in config.preprocess.settings() {
            let mut row = BenchRecord {
                game: name.clone(),
                solver: solver.name(),
                preprocess,
                time_s: None,
                outcome: BenchOutcome::Error,
                n: None,
                edges: None,
                d: None,
                passes: None,
                additions: None,
                resets: None,
                freezes: None,
            };
            if let Ok(game) = &game {
                row.n = Some(game.vertex_count());
                row.edges = Some(game.edge_count());
                row.d = Some(game.max_priority());
                measure(game, solver, preprocess, config, &mut row);
            }
            rows.push(row);
        }
    }
    rows
}

fn measure(
    game: &ParityGame,
    solver: SolverKind,
    preprocess: bool,
    config: &BenchConfig,
    row: &mut BenchRecord,
) {
    let mut total = Duration::ZERO;
    let mut last = None;
    for _ in 0..config.repetitions {
        let options = RunOptions {
            solver,
            preprocess,
            workers: config.workers,
            in_place: false,
            deadline: Deadline::after(config.timeout),
        };
        match run(game, &options) {
            Ok(outcome) => {
                total += outcome.elapsed;
                last = Some(outcome);
            }
            Err(RunError::TimedOut) => {
                row.outcome = BenchOutcome::Timeout;
                row.time_s = Some(config.timeout.as_secs_f64());
                return;
            }
            Err(RunError::Failed(e)) => {
                log::warn!("{} with {}: {e}", row.game, solver.name());
                return;
            }
        }
    }
    let Some(outcome) = last else {
        return;
    };
    row.outcome = BenchOutcome::Solved;
    row.time_s = Some(total.as_secs_f64() / config.repetitions as f64);
    if let Some(stats) = outcome.stats {
        row.passes = Some(stats.passes);
        row.additions = Some(stats.distraction_additions);
        row.resets = Some(stats.resets);
        row.freezes = Some(stats.freezes);
    }
}

/// Runs the benchmark and writes the CSV, header included, to `out`.
pub fn bench(files: &[PathBuf], config: &BenchConfig, out: impl Write) -> anyhow::Result<()> {
    let rows: Vec<Vec<BenchRecord>> = if config.parallel_games > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallel_games)
            .build()?;
        pool.install(|| files.par_iter().map(|f| bench_game(f, config)).collect())
    } else {
        files.iter().map(|f| bench_game(f, config)).collect()
    };
    let mut writer = csv::Writer::from_writer(out);
    if rows.iter().all(Vec::is_empty) {
        writer.write_record(HEADER)?;
    }
    for row in rows.iter().flatten() {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub const HEADER: [&str; 12] = [
    "game",
    "solver",
    "preprocess",
    "time_s",
    "outcome",
    "n",
    "edges",
    "d",
    "passes",
    "additions",
    "resets",
    "freezes",
];
