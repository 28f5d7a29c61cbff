//! Sequence-level invariants over finite index windows: edge numbers, β
//! proxies, equivalence certificates, cost upper bounds and the field/cost
//! sandwich.
//!
//! Every `liminf` or `inf` over the sequence is replaced by a labelled window
//! statistic; nothing here extrapolates.

mod cost;
mod equivalence;
mod estimates;
mod sequence;

use thiserror::Error;

pub use cost::{
    cost_upper_bound, sandwich_report, CostReport, CostRow, CostStrategy, FieldComparison, GapRow, LipschitzCheck, PerIndexGap,
    SandwichReport, FIELD_DIRECTION_NOTE,
};
pub use equivalence::{certify_equivalence, certify_pair, equivalence_rank_inequalities, Certificate, InequalityReport, InequalityRow, Side};
pub use estimates::{
    beta_estimate, beta_from_graphs, edge_number_estimate, edge_number_from_graphs, rank_cells, BetaReport, CellOptions, CellStatus,
    EdgeNumberReport, EdgeRow, QSummary, RankCell, Trend, WindowStats,
};
pub use sequence::{parse_window, Family, GraphSequence, DEFAULT_GIRTH_FLOOR, FAMILY_NAMES};

use crate::graph::GraphError;
use crate::hyperfinite::HyperError;
use crate::towers::TowerError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error("empty index window")]
    EmptyWindow,
    #[error("bad index window {0:?}; use lo:hi, lo:hi:step or a comma-separated increasing list")]
    BadWindow(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("vertex counts differ at index {n}: {left} vs {right}")]
    VertexMismatch { n: u64, left: usize, right: usize },
    #[error("vertex count does not increase at index {n}")]
    NotIncreasing { n: u64 },
    #[error("at index {n} the smaller graph is not a subgraph of the larger")]
    NotSubgraph { n: u64 },
    #[error("rank cell (n = {n}, q = {q}) timed out")]
    Timeout { n: u64, q: usize },
    #[error("not applicable: {0}")]
    Inapplicable(String),
}
