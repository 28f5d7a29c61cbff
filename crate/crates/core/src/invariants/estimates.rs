use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GraphSequence, InvariantError};
use crate::cycles::{cycle_rank_until, s_from_rank, FieldSpec};
use crate::exact::Exact;
use crate::graph::Graph;

/// Window statistics standing in for a `liminf`: the minimum over the window
/// and over its tail (the last `⌈w/2⌉` indices), plus the direction of the
/// sequence. These are finite-window proxies, not limits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowStats {
    pub window_min: Exact,
    pub tail_min: Exact,
    pub trend: Trend,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Constant,
    Nonincreasing,
    Nondecreasing,
    Mixed,
}

impl WindowStats {
    /// `None` for an empty list.
    pub fn of(values: &[Exact]) -> Option<Self> {
        let window_min = values.iter().min()?.clone();
        let tail = &values[values.len() / 2..];
        let tail_min = tail.iter().min()?.clone();
        let down = values.windows(2).all(|w| w[1] <= w[0]);
        let up = values.windows(2).all(|w| w[1] >= w[0]);
        let trend = match (down, up) {
            (true, true) => Trend::Constant,
            (true, false) => Trend::Nonincreasing,
            (false, true) => Trend::Nondecreasing,
            (false, false) => Trend::Mixed,
        };
        Some(WindowStats { window_min, tail_min, trend })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub n: u64,
    pub vertices: u64,
    pub edges: u64,
    pub ratio: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeNumberReport {
    pub rows: Vec<EdgeRow>,
    pub stats: WindowStats,
}

pub fn edge_number_from_graphs(graphs: &[(u64, Graph)]) -> Result<EdgeNumberReport, InvariantError> {
    let rows: Vec<EdgeRow> = graphs
        .iter()
        .map(|(n, g)| EdgeRow {
            n: *n,
            vertices: g.vertex_count() as u64,
            edges: g.edge_count() as u64,
            ratio: Exact::ratio(g.edge_count(), g.vertex_count().max(1)),
        })
        .collect();
    let ratios: Vec<Exact> = rows.iter().map(|r| r.ratio.clone()).collect();
    let stats = WindowStats::of(&ratios).ok_or(InvariantError::EmptyWindow)?;
    Ok(EdgeNumberReport { rows, stats })
}

/// `|E(G_n)| / |V(G_n)|` over the window.
pub fn edge_number_estimate(seq: &GraphSequence) -> Result<EdgeNumberReport, InvariantError> {
    edge_number_from_graphs(&seq.graphs()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Ok,
    Timeout,
}

/// One `(n, q, field)` entry of an `s_q` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCell {
    pub n: u64,
    pub q: usize,
    pub field: FieldSpec,
    pub status: CellStatus,
    pub vertices: u64,
    pub edges: u64,
    pub rank: Option<u64>,
    pub s: Option<Exact>,
    /// Wall time; informational only.
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSummary {
    pub q: usize,
    /// `None` when every cell of this `q` timed out.
    pub stats: Option<WindowStats>,
}

/// `s_q` table over the window with window statistics per `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaReport {
    pub field: FieldSpec,
    pub q_min: usize,
    pub q_max: usize,
    pub cells: Vec<RankCell>,
    pub per_q: Vec<QSummary>,
    /// Minimum over `q` of the tail minimum of `s_q`.
    pub beta_proxy: Option<Exact>,
    /// Some cell timed out and the proxy only uses completed cells.
    pub partial: bool,
}

impl BetaReport {
    pub fn cell(&self, n: u64, q: usize) -> Option<&RankCell> {
        self.cells.iter().find(|c| c.n == n && c.q == q)
    }
}

/// Options shared by every rank table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellOptions {
    pub jobs: usize,
    pub timeout: Option<Duration>,
}

impl Default for CellOptions {
    fn default() -> Self {
        CellOptions { jobs: 1, timeout: None }
    }
}

/// Computes rank cells for every `(graph, q)` pair, in input order.
pub fn rank_cells(graphs: &[(u64, Graph)], qs: &[usize], field: FieldSpec, options: CellOptions) -> Vec<RankCell> {
    let tasks: Vec<(usize, usize)> = (0..graphs.len()).flat_map(|i| qs.iter().map(move |&q| (i, q))).collect();
    crate::parallel::with_jobs(options.jobs, || {
        tasks
            .par_iter()
            .map(|&(i, q)| {
                let (n, g) = &graphs[i];
                let start = Instant::now();
                let deadline = options.timeout.map(|t| start + t);
                let rank = cycle_rank_until(g, q, field, deadline).ok();
                RankCell {
                    n: *n,
                    q,
                    field,
                    status: if rank.is_some() { CellStatus::Ok } else { CellStatus::Timeout },
                    vertices: g.vertex_count() as u64,
                    edges: g.edge_count() as u64,
                    rank: rank.map(|r| r as u64),
                    s: rank.map(|r| s_from_rank(g, r)),
                    elapsed_ms: start.elapsed().as_millis() as u64,
                }
            })
            .collect()
    })
}

pub fn beta_from_graphs(graphs: &[(u64, Graph)], field: FieldSpec, q_max: usize, options: CellOptions) -> Result<BetaReport, InvariantError> {
    if q_max < 3 {
        return Err(InvariantError::Inapplicable(format!("q_max must be at least 3, got {q_max}")));
    }
    if graphs.is_empty() {
        return Err(InvariantError::EmptyWindow);
    }
    let qs: Vec<usize> = (3..=q_max).collect();
    let cells = rank_cells(graphs, &qs, field, options);
    let partial = cells.iter().any(|c| c.status == CellStatus::Timeout);
    let per_q: Vec<QSummary> = qs
        .iter()
        .map(|&q| {
            let values: Vec<Exact> = cells.iter().filter(|c| c.q == q).filter_map(|c| c.s.clone()).collect();
            QSummary { q, stats: WindowStats::of(&values) }
        })
        .collect();
    let beta_proxy = per_q.iter().filter_map(|s| s.stats.as_ref().map(|st| st.tail_min.clone())).min();
    Ok(BetaReport { field, q_min: 3, q_max, cells, per_q, beta_proxy, partial })
}

/// `s_q` for `q = 3..=q_max` over the window, and the β proxy.
pub fn beta_estimate(seq: &GraphSequence, field: FieldSpec, q_max: usize, options: CellOptions) -> Result<BetaReport, InvariantError> {
    beta_from_graphs(&seq.graphs()?, field, q_max, options)
}
