//! The `paritydfi` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 I/O or parse error,
//! 3 invalid flags.

pub mod bench;
pub mod run;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use paritydfi::format::{
    parse_solution, read_pgsolver, write_pgsolver, write_regions, write_solution, ParseOptions,
};
use paritydfi::generate::{random_game, GenParams};
use paritydfi::verify::verify;
use paritydfi::{Deadline, ParityGame, Priority};

use crate::bench::{BenchConfig, PreprocessModes};
use crate::run::{RunError, RunOptions, SolverKind};

#[derive(Debug, Parser)]
#[command(
    name = "paritydfi",
    version,
    about = "Parity game solving by distraction fixpoint iteration"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a game and print its solution.
    Solve(SolveArgs),
    /// Check a solution file against a game.
    Verify(VerifyArgs),
    /// Print a seeded random game.
    Gen(GenArgs),
    /// Time solvers on every game in a directory and print CSV.
    Bench(BenchArgs),
    /// Print size statistics of a game.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub game: PathBuf,
    #[arg(long, value_enum, default_value = "dfi")]
    pub solver: SolverKind,
    /// Skip self-loop and controlled-cycle reductions.
    #[arg(long)]
    pub no_preprocess: bool,
    /// Check the result and exit with 1 if it is wrong.
    #[arg(long)]
    pub verify: bool,
    /// Write the solution here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Threads per level evaluation.
    #[arg(long, env = "DFI_WORKERS", default_value_t = 1)]
    pub workers: usize,
    /// Apply new distractions immediately within a pass.
    #[arg(long)]
    pub in_place: bool,
    /// Print solver counters to standard error.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub game: PathBuf,
    pub solution: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Maximum priority.
    #[arg(long)]
    pub d: Priority,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub min_out: usize,
    /// Defaults to min(4, n).
    #[arg(long)]
    pub max_out: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub self_loops: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub dir: PathBuf,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "dfi,dfi-basic,zlk"
    )]
    pub solvers: Vec<SolverKind>,
    /// Preprocessing settings to run each solver under.
    #[arg(long, value_enum, default_value = "both")]
    pub preprocess: PreprocessModes,
    /// Seconds per run before it is recorded as a timeout.
    #[arg(long, default_value_t = 1800.0)]
    pub timeout: f64,
    #[arg(long, visible_alias = "reps", default_value_t = 5)]
    pub repetitions: usize,
    #[arg(long, env = "DFI_WORKERS", default_value_t = 1)]
    pub workers: usize,
    /// Games benchmarked concurrently.
    #[arg(long, default_value_t = 1)]
    pub parallel_games: usize,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub game: PathBuf,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Rejected(Vec<String>),
    Input(anyhow::Error),
    Usage(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Input(_) => 2,
            Failure::Usage(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.into())
    }
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn main_with(
    args: impl IntoIterator<Item = OsString>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(failure) => {
            match &failure {
                Failure::Rejected(lines) => {
                    for line in lines {
                        let _ = writeln!(out, "{line}");
                    }
                }
                Failure::Input(e) => {
                    let _ = writeln!(err, "error: {e:#}");
                }
                Failure::Usage(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                }
            }
            failure.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Solve(args) => solve(args, out, err),
        Command::Verify(args) => verify_files(args, out),
        Command::Gen(args) => generate(args, out),
        Command::Bench(args) => run_bench(args, out),
        Command::Stats(args) => stats(args, out),
    }
}

pub fn load_game(path: &Path) -> anyhow::Result<ParityGame> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_pgsolver(BufReader::new(file), ParseOptions::default())
        .with_context(|| format!("cannot read game {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn solve(args: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let dfi_family = matches!(args.solver, SolverKind::Dfi | SolverKind::DfiBasic);
    if args.verify && !args.solver.has_strategies() {
        return Err(Failure::Usage(format!(
            "--verify needs strategies, which {} does not compute",
            args.solver.name()
        )));
    }
    if args.in_place && !dfi_family {
        return Err(Failure::Usage(
            "--in-place applies to dfi solvers only".into(),
        ));
    }
    if args.workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    if args.in_place && args.workers > 1 {
        return Err(Failure::Usage(
            "--in-place cannot be combined with more than one worker".into(),
        ));
    }
    let game = load_game(&args.game)?;
    let options = RunOptions {
        solver: args.solver,
        preprocess: !args.no_preprocess,
        workers: if dfi_family { args.workers } else { 1 },
        in_place: args.in_place,
        deadline: Deadline::NEVER,
    };
    let outcome = run::run(&game, &options).map_err(|e| match e {
        RunError::TimedOut => Failure::Input(anyhow::anyhow!("solver timed out")),
        RunError::Failed(msg) => Failure::Input(anyhow::anyhow!(msg)),
    })?;
    if args.stats {
        let mut line = format!(
            "solver={} preprocess={} decided={} time_s={:.6}",
            args.solver.name(),
            options.preprocess,
            outcome.decided,
            outcome.elapsed.as_secs_f64()
        );
        if let Some(s) = outcome.stats {
            line += &format!(
                " passes={} additions={} resets={} freezes={}",
                s.passes, s.distraction_additions, s.resets, s.freezes
            );
        }
        writeln!(err, "{line}")?;
    }
    let text = match outcome.solution() {
        Some(sol) => {
            if args.verify {
                let report = verify(&game, &sol);
                if !report.ok {
                    return Err(Failure::Rejected(
                        report
                            .violations
                            .iter()
                            .map(|v| v.describe(&game))
                            .collect(),
                    ));
                }
            }
            write_solution(&game, &sol)
        }
        None => write_regions(&game, &outcome.winner),
    };
    emit(&text, args.output.as_deref(), out)
}

fn verify_files(args: VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let game = load_game(&args.game)?;
    let text = std::fs::read_to_string(&args.solution)
        .with_context(|| format!("cannot open {}", args.solution.display()))?;
    let solution = parse_solution(&text, &game)
        .with_context(|| format!("cannot read solution {}", args.solution.display()))?;
    let report = verify(&game, &solution);
    if report.ok {
        writeln!(out, "ok")?;
        Ok(())
    } else {
        Err(Failure::Rejected(
            report
                .violations
                .iter()
                .map(|v| v.describe(&game))
                .collect(),
        ))
    }
}

fn generate(args: GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let params = GenParams {
        n: args.n,
        max_priority: args.d,
        min_outdegree: args.min_out,
        max_outdegree: args.max_out.unwrap_or(args.n.clamp(1, 4)),
        self_loop_probability: args.self_loops,
        seed: args.seed,
    };
    let game = random_game(&params).map_err(|e| Failure::Usage(e.to_string()))?;
    emit(&write_pgsolver(&game), args.output.as_deref(), out)
}

fn run_bench(args: BenchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        return Err(Failure::Usage(
            "--timeout must be a positive number of seconds".into(),
        ));
    }
    if args.repetitions == 0 || args.workers == 0 || args.parallel_games == 0 {
        return Err(Failure::Usage(
            "--repetitions, --workers and --parallel-games must be at least 1".into(),
        ));
    }
    let files = bench::game_files(&args.dir)
        .with_context(|| format!("cannot list {}", args.dir.display()))?;
    let config = BenchConfig {
        solvers: args.solvers,
        preprocess: args.preprocess,
        timeout: Duration::from_secs_f64(args.timeout),
        repetitions: args.repetitions,
        workers: args.workers,
        parallel_games: args.parallel_games,
    };
    bench::bench(&files, &config, out)?;
    Ok(())
}

fn stats(args: StatsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let game = load_game(&args.game)?;
    let s = game.stats();
    writeln!(out, "vertices: {}", s.vertices)?;
    writeln!(out, "edges: {}", s.edges)?;
    writeln!(out, "max priority: {}", s.max_priority)?;
    writeln!(out, "distinct priorities: {}", s.distinct_priorities)?;
    writeln!(out, "average outdegree: {:.3}", s.average_outdegree)?;
    Ok(())
}
