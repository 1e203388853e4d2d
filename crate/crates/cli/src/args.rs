use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Calibrated recommendation lists: solvers, property checks and worked examples.
///
/// Exit status: 0 success, 1 parse or validation error, 2 a check failed.
#[derive(Debug, Parser)]
#[command(name = "listcal", version)]
pub struct Cli {
    /// Print one JSON record per line instead of tables.
    #[arg(long, global = true)]
    pub machine: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance file.
    Solve(SolveArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
    /// Reproduce a worked example table.
    Repro(ReproArgs),
    /// Approximation-ratio report (same as `verify ratios`).
    Bench(RatioArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance file (JSON).
    pub file: PathBuf,

    /// greedy, discrete-greedy, distributional, with-repeats or exhaustive.
    #[arg(long, short, default_value = "greedy")]
    pub algorithm: String,

    /// hellinger, power:B, concave:root:B, concave:log1p, concave:exp:C or
    /// fdiv:hellinger|tv:D.
    #[arg(long, short, default_value = "hellinger")]
    pub measure: String,

    /// Use only the first K positions (weights renormalized).
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long)]
    pub allow_repeats: bool,

    #[command(flatten)]
    pub continuous: ContinuousArgs,

    /// Try every list length up to k and keep the best.
    #[arg(long)]
    pub best_length: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ContinuousArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Continuous greedy steps.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,

    /// Samples per gradient estimate.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Mdr,
    OrderedSubmodular,
    Prop41,
    Ratios,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,

    /// Measures to check (repeatable). `kl-mmr-demo` selects the mixed-sign
    /// KL/MMR heuristic as a negative control.
    #[arg(long, short)]
    pub measure: Vec<String>,

    #[arg(long, default_value_t = 1000)]
    pub trials: usize,

    /// Instance bounds, seed and ratio options (`--seed` also seeds the checks).
    #[command(flatten)]
    pub ratios: RatioArgs,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ShapeArgs {
    #[arg(long)]
    pub max_genres: Option<usize>,
    #[arg(long)]
    pub max_items: Option<usize>,
    #[arg(long)]
    pub max_k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    /// Algorithm for ratio reports.
    #[arg(long, short, default_value = "discrete-greedy")]
    pub algorithm: String,

    /// Number of generated instances.
    #[arg(long, short, default_value_t = 1000)]
    pub n: usize,

    /// Seeds per instance for randomized algorithms (median is used).
    #[arg(long, default_value_t = 5)]
    pub seeds: usize,

    #[command(flatten)]
    pub continuous: ContinuousArgs,

    #[command(flatten)]
    pub shape: ShapeArgs,

    /// Where to write the replayable counterexample or worst instance.
    #[arg(long)]
    pub counterexample_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReproTarget {
    AppendixB,
    AppendixC,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub target: ReproTarget,
}
