use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Invariants of bounded-degree graph sequences: cycle-space ranks, β
/// proxies, cost bounds, hyperfinite partitions, expansion and towers.
///
/// Every command writes one JSON report (schema v1) to `--out` or stdout and,
/// with `--csv`, a flat table. Exit codes: 0 ok, 1 invalid configuration,
/// 2 computation failure or timeout (a partial report is still written),
/// 3 I/O error.
#[derive(Parser, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[command(name = "graphseq", version, about, long_about)]
pub struct RunConfig {
    /// Worker threads for cell-level parallelism.
    #[arg(long, global = true, env = "GRAPHSEQ_JOBS", default_value_t = 1)]
    pub jobs: usize,
    /// JSON report path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// CSV table path.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Per-cell time limit in seconds for rank computations.
    #[arg(long, global = true)]
    pub timeout: Option<f64>,
    /// Zero the timestamp and timing fields so equal runs give equal bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the graphs come from: a built-in family, a tower descriptor, or
/// edge-list files.
#[derive(Args, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceArgs {
    /// Built-in family: cycle, z-tower, torus2, torus2diag, freeF2-sl2,
    /// heisenberg, random-cubic, random-tree.
    #[arg(long)]
    pub family: Option<String>,
    /// Tower descriptor JSON.
    #[arg(long)]
    pub tower: Option<PathBuf>,
    /// Edge-list files, one per window index (repeatable).
    #[arg(long = "graph")]
    pub graphs: Vec<PathBuf>,
    /// Index window: `lo:hi`, `lo:hi:step` or `a,b,c`.
    #[arg(long)]
    pub window: Option<String>,
    /// Seed for random families.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Girth floor for `random-cubic`.
    #[arg(long)]
    pub girth_floor: Option<usize>,
}

/// Second sequence for `equiv`.
#[derive(Args, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OtherSourceArgs {
    #[arg(long = "other-family", id = "other_family")]
    pub family: Option<String>,
    #[arg(long = "other-tower", id = "other_tower")]
    pub tower: Option<PathBuf>,
    #[arg(long = "other-graph", id = "other_graph")]
    pub graphs: Vec<PathBuf>,
    #[arg(long = "other-seed", id = "other_seed", default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMethod {
    /// Closest-point blocks of a greedy q-net (trees).
    Tree,
    /// `s x s` boxes of a 2-dimensional torus tower.
    Boxes,
    /// Blocks built from a covering family file.
    Covering,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Roots {
    /// Every vertex is a root.
    All,
    /// Only vertex 0; exact for vertex-transitive graphs such as Cayley graphs.
    VertexTransitive,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Write the window's graphs as edge-list files plus a manifest.
    Gen {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Table of s_q over the window for q = 3..=qmax, and the β proxy.
    Beta {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 6)]
        qmax: usize,
        /// Largest accepted qmax; cycle counts grow exponentially in q.
        #[arg(long, default_value_t = 12)]
        q_cap: usize,
        /// Comma-separated fields, e.g. `Q,F2,F3`.
        #[arg(long, default_value = "Q")]
        fields: String,
    },
    /// Cost upper bounds from compressions with equivalence witnesses.
    Cost {
        #[command(flatten)]
        source: SourceArgs,
        /// `identity`, `boxes:S`, `tree-net:Q` or `coset:K:WORD[,WORD...]` (repeatable).
        #[arg(long = "strategy", default_value = "identity")]
        strategies: Vec<String>,
    },
    /// Equivalence certificate between two sequences, optionally with the
    /// rank inequalities for a subgraph pair.
    Equiv {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        other: OtherSourceArgs,
        /// Check s_q(H) >= s_q(G) >= s_{qL}(H) with G the first sequence and H ⊆ G the second.
        #[arg(long)]
        inequalities: bool,
        /// q values for the inequalities (`lo:hi` or list).
        #[arg(long, default_value = "3:6")]
        qs: String,
        #[arg(long, default_value = "Q")]
        fields: String,
    },
    /// Hyperfinite partitions and their validation.
    Hyperfinite {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum)]
        method: PartitionMethod,
        /// Net spacing for `tree`.
        #[arg(long)]
        q: Option<usize>,
        /// Box side for `boxes`.
        #[arg(long)]
        s: Option<usize>,
        /// Covering family JSON (list of vertex-id lists) for `covering`.
        #[arg(long)]
        covering: Option<PathBuf>,
        /// Declared ω of the covering family (`a/b`); measured when absent.
        #[arg(long)]
        omega: Option<String>,
        /// Cut-ratio threshold for validation (`a/b`).
        #[arg(long)]
        epsilon: Option<String>,
        /// Block-size limit for validation.
        #[arg(long)]
        block_limit: Option<usize>,
    },
    /// Exact minimum boundary ratio over connected vertex sets of size m.
    Expansion {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        m: usize,
        /// Largest accepted m.
        #[arg(long, default_value_t = 10)]
        cap: usize,
        #[arg(long, value_enum, default_value = "all")]
        roots: Roots,
    },
    /// Quotient sizes, girth, mod-p homology of the Schreier graphs and rank gradient terms.
    Tower {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value = "2,3")]
        primes: String,
    },
    /// β_Q <= β_Fp <= cost - 1 at finite scale, with the gaps.
    Sandwich {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value = "2")]
        primes: String,
        #[arg(long, default_value_t = 6)]
        qmax: usize,
        #[arg(long, default_value_t = 12)]
        q_cap: usize,
        #[arg(long = "strategy")]
        strategies: Vec<String>,
    },
    /// Combine existing reports into one.
    ReportMerge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Beta { .. } => "beta",
            Command::Cost { .. } => "cost",
            Command::Equiv { .. } => "equiv",
            Command::Hyperfinite { .. } => "hyperfinite",
            Command::Expansion { .. } => "expansion",
            Command::Tower { .. } => "tower",
            Command::Sandwich { .. } => "sandwich",
            Command::ReportMerge { .. } => "report-merge",
        }
    }
}
