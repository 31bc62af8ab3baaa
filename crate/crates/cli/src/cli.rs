//! Command-line arguments. Flags override values from `--config`, which
//! override built-in defaults.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "schatten", version, about = "Sampling estimators for Schatten 2-norms of quantum operations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the normalized Schatten 2-norm of a mixture, or of U1 - U2.
    Estimate(EstimateArgs),
    /// Estimation error against sample size for random 6-qubit differences.
    Fig2(Fig2Args),
    /// Fidelity statistics for pairs of nearby unitaries.
    Similarity(SimilarityArgs),
    /// Learn circuit parameters (or a square root) by gradient descent.
    Learn(LearnArgs),
    /// Decide whether two circuits are (epsilon, delta)-similar.
    Decide(DecideArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads. Changes speed only, never results.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON file with command parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Mixture file.
    #[arg(long, conflicts_with_all = ["u1", "u2"])]
    pub mixed: Option<PathBuf>,
    /// First circuit file (difference mode).
    #[arg(long, requires = "u2")]
    pub u1: Option<PathBuf>,
    /// Second circuit file (difference mode).
    #[arg(long, requires = "u1")]
    pub u2: Option<PathBuf>,
    /// Number of θ samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Target precision; with --delta derives the sample count.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Guess of the norm, used by the sample-count bound.
    #[arg(long)]
    pub norm_hint: Option<f64>,
    /// Shots per Hadamard test; 0 is exact.
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct Fig2Args {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of random operator pairs.
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Comma-separated sample sizes.
    #[arg(long = "m", value_delimiter = ',')]
    pub m_values: Option<Vec<usize>>,
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct SimilarityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Haar states per pair.
    #[arg(long)]
    pub states: Option<usize>,
    #[arg(long)]
    pub min_norm: Option<f64>,
    #[arg(long)]
    pub max_norm: Option<f64>,
    /// Failure probability defining the fidelity threshold.
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct LearnArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ansatz file.
    #[arg(long)]
    pub ansatz: Option<PathBuf>,
    /// Target circuit file.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Learn U with U^2 = target; the ansatz must have repeat = 2.
    #[arg(long)]
    pub sqrt: bool,
    /// Cost-history CSV; defaults to --out with a .csv extension.
    #[arg(long)]
    pub history: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub fd_eps: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct DecideArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub u1: Option<PathBuf>,
    #[arg(long)]
    pub u2: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub delta_hat: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub shots: Option<u64>,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Estimate(a) => &a.common,
            Command::Fig2(a) => &a.common,
            Command::Similarity(a) => &a.common,
            Command::Learn(a) => &a.common,
            Command::Decide(a) => &a.common,
        }
    }
}
