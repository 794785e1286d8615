use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qleak_core::leakage::AscentConfig;
use qleak_core::par::Execution;

#[derive(Debug, Parser)]
#[command(name = "qleak", version, about = "Maximal quantum leakage of classical-quantum ensembles")]
pub struct Cli {
    /// Worker threads for restart-level parallelism (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the maximal leakage of an ensemble.
    Compute(ComputeArgs),
    /// Leakage under depolarizing noise over a grid of strengths.
    NoiseSweep(SweepArgs),
    /// Check the structural leakage properties on an ensemble.
    Verify(VerifyArgs),
    /// Print an ensemble (e.g. a builtin preset) in the JSON input format.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AscentArgs {
    /// Step size of the subgradient ascent.
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    /// Termination threshold on the objective change.
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Number of POVM elements (default d²).
    #[arg(long)]
    pub povm_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Take plain steps even when they lower the objective.
    #[arg(long)]
    pub no_backtracking: bool,
}

impl AscentArgs {
    pub fn config(&self, execution: Execution) -> AscentConfig {
        AscentConfig {
            step_size: self.mu,
            epsilon: self.eps,
            max_iters: self.max_iters,
            restarts: self.restarts,
            seed: self.seed,
            povm_size: self.povm_size,
            backtracking: !self.no_backtracking,
            execution,
            ..AscentConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Ensemble JSON file or `builtin:NAME` (index2, index4, index8, amplitude3).
    #[arg(long)]
    pub ensemble: String,
    #[command(flatten)]
    pub ascent: AscentArgs,
    /// Output directory for result.json and per-restart trace CSVs.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    Global,
    Local,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub ensemble: String,
    #[arg(long, value_enum)]
    pub channel: ChannelKind,
    #[arg(long, default_value_t = 0.0)]
    pub p_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_end: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 21)]
    pub p_steps: usize,
    #[command(flatten)]
    pub ascent: AscentArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub ensemble: String,
    /// Channel for the data-processing check (default: seeded random channel).
    #[arg(long)]
    pub channel_file: Option<PathBuf>,
    #[command(flatten)]
    pub ascent: AscentArgs,
    /// Directory for verify_report.json.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Corrupt the optimizer's POVM before checking (exercises the failure path).
    #[arg(long, hide = true)]
    pub inject_corrupt_povm: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub ensemble: String,
}
