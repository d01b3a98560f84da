use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tamereg::tameness::{DEFAULT_LADDER_CAP, DEFAULT_LITTLESTONE_CAP, DEFAULT_NODE_BUDGET, DEFAULT_VC_CAP};

/// Tameness invariants and regularity partitions for bipartite graphs.
#[derive(Debug, Parser)]
#[command(name = "tamereg", version)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a graph from a named family.
    Generate(GenerateArgs),
    /// Ladder index, VC and Littlestone dimension.
    Analyze(AnalyzeArgs),
    /// Split a measure on V into type atoms over parameters in W.
    Decompose(DecomposeArgs),
    /// Check whether a target set is dominated by the types over parameters.
    Dominate(DominateArgs),
    /// Build a regularity partition.
    Partition(PartitionArgs),
    /// Check a partition against a graph; exit 2 if it fails.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Half,
    Complete,
    Empty,
    Random,
    Interval,
    Parity,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long)]
    pub family: FamilyName,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Size of the half graph, or the dimension of the parity graph.
    #[arg(long)]
    pub k: Option<usize>,
    /// Intervals per W-vertex.
    #[arg(long)]
    pub s: Option<usize>,
    /// Edge probability as a rational.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_LADDER_CAP)]
    pub cap_ladder: usize,
    #[arg(long, default_value_t = DEFAULT_VC_CAP)]
    pub cap_vc: usize,
    #[arg(long, default_value_t = DEFAULT_LITTLESTONE_CAP)]
    pub cap_ld: usize,
    /// Search nodes per dimension before the result becomes a lower bound.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
    /// Also report the shatter function up to this subset size.
    #[arg(long)]
    pub profile: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MeasureArgs {
    /// Weights on V, lines `<index> <rational>` (default: uniform).
    #[arg(long)]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    pub graph: PathBuf,
    /// Comma-separated W indices.
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub measure: MeasureArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DominateMode {
    Smooth,
    Generic,
}

#[derive(Debug, Args, Serialize)]
pub struct DominateArgs {
    pub graph: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub params: Vec<usize>,
    /// Target set, e.g. `(col(0) and not col(2))` or `set{1,4}`.
    #[arg(long)]
    pub target: String,
    /// Mass threshold for the generic check.
    #[arg(long, default_value = "0")]
    pub delta: String,
    #[arg(long, value_enum, default_value_t = DominateMode::Smooth)]
    pub mode: DominateMode,
    #[command(flatten)]
    #[serde(flatten)]
    pub measure: MeasureArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Stable,
    Nip,
    Distal,
}

#[derive(Debug, Args, Serialize)]
pub struct PartitionArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub mode: ModeName,
    #[arg(long)]
    pub epsilon: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Absorption threshold for the stable engine.
    #[arg(long)]
    pub eta: Option<String>,
    /// Splits before the stable engine falls back to singletons.
    #[arg(long)]
    pub max_splits: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub sample_c: u64,
    #[arg(long, default_value_t = 5)]
    pub retries: usize,
    /// Parts per side for the nip engine.
    #[arg(long)]
    pub max_parts: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_VC_CAP)]
    pub cap_vc: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub measure: MeasureArgs,
    /// Weights on W for the nip engine (default: uniform).
    #[arg(long)]
    pub weights_w: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Partition JSON, as written by `partition --report`.
    pub report: PathBuf,
    pub graph: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub measure: MeasureArgs,
    #[arg(long)]
    pub weights_w: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
