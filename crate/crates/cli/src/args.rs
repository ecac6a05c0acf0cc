use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "rls", version, about = "Robust local subgraph mining by natural connectivity")]
pub struct Cli {
    /// Print results and errors as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mine the most robust subgraph(s) of a given size.
    Mine(MineArgs),
    /// Run a densest-subgraph baseline.
    Baseline(BaselineArgs),
    /// Generate a synthetic graph, optionally with a planted clique.
    Gen(GenArgs),
    /// Significance tests, planted recovery, size sweeps and scaling probes.
    Eval(EvalArgs),
    /// Print vertex count, edge count, edge density and robustness.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MineAlgo {
    Grasp,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disjoint {
    Node,
    Edge,
}

#[derive(Args, Debug, Serialize)]
pub struct MineArgs {
    #[arg(long, value_enum)]
    pub algo: MineAlgo,
    /// Subgraph size (for --rgs with grasp: construction size).
    #[arg(long)]
    pub size: usize,
    /// Return the k best subgraphs.
    #[arg(long, conflicts_with = "rgs")]
    pub k: Option<usize>,
    /// How greedy top-k rounds exclude earlier results.
    #[arg(long, value_enum, requires = "k")]
    pub disjoint: Option<Disjoint>,
    /// Largest Jaccard similarity between grasp top-k results.
    #[arg(long, requires = "k")]
    pub max_overlap: Option<f64>,
    /// File of seed vertex labels that every result must contain.
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub tmax: usize,
    /// Eigen-pairs kept by the spectral computations.
    #[arg(long, default_value_t = 50)]
    pub eigs: usize,
    #[arg(long, default_value_t = 0.8)]
    pub beta_lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta_hi: f64,
    /// Drop the size constraint and return the best subgraph of any size.
    #[arg(long)]
    pub rgs: bool,
    /// Exact triangle counts for the first grasp pick.
    #[arg(long)]
    pub exact_triangles: bool,
    /// Allow grasp local search to delete vertices that disconnect the set.
    #[arg(long)]
    pub allow_disconnect: bool,
    /// Greedy: skip first-order updates between scheduled re-solves.
    #[arg(long)]
    pub recompute_only: bool,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct CommonArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Output prefix.
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth vertex labels for precision and recall.
    #[arg(long)]
    pub planted: Option<PathBuf>,
    /// Restrict the input to its largest connected component.
    #[arg(long)]
    pub lcc: bool,
    /// Leave timing fields empty so outputs are byte-reproducible.
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineAlgo {
    Charikar,
    OqcGreedy,
    OqcLs,
}

#[derive(Args, Debug, Serialize)]
pub struct BaselineArgs {
    #[arg(long, value_enum)]
    pub algo: BaselineAlgo,
    /// Edge-surplus weight.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub alpha: f64,
    /// Return the peeling snapshot with exactly this many vertices.
    #[arg(long)]
    pub size: Option<usize>,
    /// Start vertex label for oqc-ls.
    #[arg(long)]
    pub seed_vertex: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub max_sweeps: usize,
    /// Eigen-pairs used for reported robustness.
    #[arg(long, default_value_t = 50)]
    pub eigs: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Er,
    ChungLu,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    /// Edge probability (er).
    #[arg(long, conflicts_with_all = ["gamma", "avg_deg"])]
    pub p: Option<f64>,
    /// Power-law exponent (chung-lu).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Target mean degree (chung-lu).
    #[arg(long)]
    pub avg_deg: Option<f64>,
    /// Plant a clique of this size.
    #[arg(long)]
    pub inject_clique: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    Significance,
    Planted,
    Sweep,
    Scaling,
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub mode: EvalMode,
    /// Edge list (significance, planted, sweep).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Vertex labels of the subgraph to evaluate (significance, planted).
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    /// Ground-truth labels (planted).
    #[arg(long)]
    pub planted: Option<PathBuf>,
    /// Rewired replicates (significance).
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    /// Rewire with degree-preserving swaps (significance).
    #[arg(long)]
    pub degree_preserving: bool,
    /// Subgraph sizes (sweep).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Vertex counts of generated graphs (scaling).
    #[arg(long, value_delimiter = ',')]
    pub ns: Vec<usize>,
    /// Generator for scaling graphs.
    #[arg(long, value_enum, default_value = "er")]
    pub model: Model,
    #[arg(long, default_value_t = 10.0)]
    pub avg_deg: f64,
    #[arg(long, default_value_t = 2.5)]
    pub gamma: f64,
    /// Subgraph size (scaling).
    #[arg(long, default_value_t = 50)]
    pub size: usize,
    #[arg(long, default_value_t = 50)]
    pub tmax: usize,
    #[arg(long, default_value_t = 50)]
    pub eigs: usize,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub omit_timing: bool,
    /// Output prefix for report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub eigs: usize,
    #[arg(long)]
    pub lcc: bool,
}
