//! Command-line driver for the `covertime` library.
//!
//! Five subcommands cover the experiment surface: `compare` estimates
//! partial-cover-time curves for a set of strategies, `budget` probes
//! how often the budgeted degree sampler finds a true minimum, `stats`
//! summarizes a graph, `oracle` checks Monte-Carlo estimates against
//! exact expectations on small graphs, and `stopping` tabulates the
//! cutoff stopping rule.
//!
//! Exit codes: 0 on success, 2 for input errors (bad flags, unreadable
//! or malformed graphs, invalid parameters), 3 for statistical failures
//! (all trials truncated, oracle mismatch beyond three standard errors).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use covertime::Error;

#[derive(Parser)]
#[command(
    name = "covertime",
    version,
    about = "Random-walk graph exploration: cover-time curves, budget probes, \
             exact oracles, and stopping rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate partial-cover-time curves for several strategies and
    /// plot them side by side
    Compare(CompareArgs),
    /// Measure how often a budget-limited degree probe finds the true
    /// minimum-degree unvisited neighbor
    Budget(BudgetArgs),
    /// Summarize a graph: size, degrees, clustering, diameter
    Stats(StatsArgs),
    /// Check a Monte-Carlo estimate against the exact expectation on a
    /// small graph
    Oracle(OracleArgs),
    /// Tabulate the cutoff stopping rule's expected reward and report
    /// the best cutoff
    Stopping(StoppingArgs),
}

/// Where the graph comes from: a file, a generator, or a manifest entry.
#[derive(Args)]
struct SourceArgs {
    /// Edge-list file: one "u v" pair per line, # comments allowed
    #[arg(long, value_name = "PATH", conflicts_with = "gen")]
    graph: Option<PathBuf>,

    /// Generator spec: complete:n | star:n | path:n | hypercube:dim |
    /// lollipop:c,p | mesh3d:a,b,c | geometric:n,radius,seed | ba:n,k,seed
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,

    /// Key=value manifest; command-line flags override its entries
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Comma-separated strategies: srw | ep | ad | mdw | rwc:d=K | md:B=K
    /// (bare "rwc" and "md" pick up --rwc-d and --budget)
    /// [default: srw,ep,ad,rwc,md]
    #[arg(long, value_name = "LIST")]
    strategies: Option<String>,

    /// Smallest coverage fraction [default: 0.01]
    #[arg(long, value_name = "FRACTION")]
    tau_min: Option<f64>,

    /// Largest coverage fraction [default: 0.30]
    #[arg(long, value_name = "FRACTION")]
    tau_max: Option<f64>,

    /// Coverage-grid spacing [default: 0.01]
    #[arg(long, value_name = "STEP")]
    tau_step: Option<f64>,

    /// Trials per start node [default: 10]
    #[arg(long, value_name = "COUNT")]
    trials: Option<u64>,

    /// Sample budget for bare "md" entries [default: 5]
    #[arg(long, value_name = "B")]
    budget: Option<u32>,

    /// Draw count for bare "rwc" entries [default: 3]
    #[arg(long, value_name = "D")]
    rwc_d: Option<u32>,

    /// Start policy: all | sample:K | comma-separated node ids
    /// [default: sample:32, or all when n <= 256]
    #[arg(long, value_name = "POLICY")]
    starts: Option<String>,

    /// Master seed [fallback: COVERTIME_SEED, then 42]
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads; 1 forces serial execution [default: all cores]
    #[arg(long, value_name = "COUNT")]
    threads: Option<usize>,

    /// Output directory for curve.csv, pct_max.csv, curve.svg [default: .]
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Comma-separated budget grid [default: 1,2,3,4,5,6,7,8,9,10]
    #[arg(long, value_name = "LIST")]
    budgets: Option<String>,

    /// Full-cover walks per start node [default: 10]
    #[arg(long, value_name = "COUNT")]
    trials: Option<u64>,

    /// Start policy: all | sample:K | comma-separated node ids
    /// [default: sample:32, or all when n <= 256]
    #[arg(long, value_name = "POLICY")]
    starts: Option<String>,

    /// Master seed [fallback: COVERTIME_SEED, then 42]
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for budget.csv, budget.svg [default: .]
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Output directory for stats.csv, histogram.csv [default: .]
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Strategy to check: srw | ad | mdw [default: srw]
    #[arg(long, value_name = "SPEC")]
    strategy: Option<String>,

    /// Coverage fraction [default: 1.0]
    #[arg(long, value_name = "FRACTION")]
    tau: Option<f64>,

    /// Start node [default: 0]
    #[arg(long, value_name = "NODE")]
    start: Option<u32>,

    /// Monte-Carlo trials [default: 10000]
    #[arg(long, value_name = "COUNT")]
    trials: Option<u64>,

    /// Master seed [fallback: COVERTIME_SEED, then 42]
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads; 1 forces serial execution [default: all cores]
    #[arg(long, value_name = "COUNT")]
    threads: Option<usize>,
}

#[derive(Args)]
struct StoppingArgs {
    /// How a successful selection is weighted by its stop position
    /// [default: constant]
    #[arg(long, value_enum)]
    weight: Option<WeightKind>,

    /// Decay scale for the exponential weight (required with it)
    #[arg(long, value_name = "SCALE")]
    theta: Option<f64>,

    /// Number of candidates [default: 1000]
    #[arg(long, value_name = "COUNT")]
    n: Option<u32>,

    /// Key=value manifest; command-line flags override its entries
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory for stopping.csv [default: .]
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightKind {
    /// Constant weight: reward 1 whenever the true minimum is selected
    Constant,
    /// Exponential weight w(k) = (k-1) exp(-k/theta) at stop position k
    Exp,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compare(args) => commands::compare(args),
        Command::Budget(args) => commands::budget(args),
        Command::Stats(args) => commands::stats(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Stopping(args) => commands::stopping(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Maps library errors onto the documented exit codes: statistical
/// failures are 3, everything else is an input error, 2.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::AllTrialsTruncated { .. } | Error::SingularSystem { .. } => 3,
        _ => 2,
    }
}
