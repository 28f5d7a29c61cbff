use serde::{Deserialize, Serialize};

use super::estimates::{rank_cells, CellOptions};
use super::{GraphSequence, InvariantError};
use crate::cycles::FieldSpec;
use crate::exact::Exact;
use crate::graph::metric::UNREACHED;
use crate::graph::{domination_constant, EquivalenceWitness, Graph, GraphError, Lipschitz, VertexId};

/// Outcome of [`certify_equivalence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Uniform constants over the window: `d_B <= forward d_A` and `d_A <= backward d_B`.
    Witness(EquivalenceWitness),
    /// At index `n`, the endpoints of `edge` (an edge of `source`) are
    /// disconnected in the other sequence.
    CounterExample { n: u64, edge: (VertexId, VertexId), source: Side },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

/// First edge of `h` whose endpoints are disconnected in `g`.
fn disconnected_edge(g: &Graph, h: &Graph) -> Option<(VertexId, VertexId)> {
    let (labels, _) = g.component_labels();
    h.edges().iter().copied().find(|&(u, w)| labels[u] != labels[w])
}

/// Equivalence constants of two graphs on the same vertex set.
pub fn certify_pair(n: u64, a: &Graph, b: &Graph) -> Result<Certificate, InvariantError> {
    if a.vertex_count() != b.vertex_count() {
        return Err(InvariantError::VertexMismatch { n, left: a.vertex_count(), right: b.vertex_count() });
    }
    if let Some(edge) = disconnected_edge(b, a) {
        return Ok(Certificate::CounterExample { n, edge, source: Side::First });
    }
    if let Some(edge) = disconnected_edge(a, b) {
        return Ok(Certificate::CounterExample { n, edge, source: Side::Second });
    }
    let mut w = EquivalenceWitness::between(a, b)?;
    w.verified_indices = vec![n];
    Ok(Certificate::Witness(w))
}

/// Uniform equivalence witness over the window, or the first counterexample.
pub fn certify_equivalence(a: &GraphSequence, b: &GraphSequence) -> Result<Certificate, InvariantError> {
    if a.window != b.window {
        return Err(InvariantError::Inapplicable("sequences must share their window".into()));
    }
    let mut uniform: Option<EquivalenceWitness> = None;
    for &n in &a.window {
        match certify_pair(n, &a.graph(n)?, &b.graph(n)?)? {
            Certificate::Witness(w) => uniform = Some(uniform.map_or(w.clone(), |u| u.merge(&w))),
            counter => return Ok(counter),
        }
    }
    Ok(Certificate::Witness(uniform.expect("nonempty window")))
}

/// One `(n, q, field)` check of the two finite-index rank inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityRow {
    pub n: u64,
    pub q: usize,
    pub field: FieldSpec,
    pub s_q_h: Exact,
    pub s_q_g: Exact,
    pub s_ql_h: Exact,
    /// `s_q(H) >= s_q(G)`.
    pub lower_holds: bool,
    /// `s_q(G) >= s_{qL}(H)`.
    pub upper_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    /// Uniform constant `L` with `d_H <= L d_G`.
    pub l: usize,
    pub rows: Vec<InequalityRow>,
    /// `q` values skipped because they do not exceed `L`.
    pub skipped_q: Vec<usize>,
    pub failures: Vec<(u64, usize, FieldSpec)>,
}

impl InequalityReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For `H ⊆ G` with `d_H <= L d_G`: checks `s_q(H) >= s_q(G)` and
/// `s_q(G) >= s_{qL}(H)` for every window index, field, and `q > L`.
pub fn equivalence_rank_inequalities(
    g_seq: &GraphSequence,
    h_seq: &GraphSequence,
    qs: &[usize],
    fields: &[FieldSpec],
    options: CellOptions,
) -> Result<InequalityReport, InvariantError> {
    if g_seq.window != h_seq.window {
        return Err(InvariantError::Inapplicable("sequences must share their window".into()));
    }
    let mut gs = Vec::new();
    let mut hs = Vec::new();
    let mut l = 1usize;
    for &n in &g_seq.window {
        let (g, h) = (g_seq.graph(n)?, h_seq.graph(n)?);
        if g.vertex_count() != h.vertex_count() {
            return Err(InvariantError::VertexMismatch { n, left: g.vertex_count(), right: h.vertex_count() });
        }
        if !h.is_subgraph_of(&g) {
            return Err(InvariantError::NotSubgraph { n });
        }
        match domination_constant(&h, &g)? {
            Lipschitz::Finite(c) => l = l.max(c),
            Lipschitz::Unbounded => {
                let edge = disconnected_edge(&h, &g).unwrap_or((UNREACHED, UNREACHED));
                return Err(GraphError::InvalidParameter(format!("index {n}: edge {edge:?} is disconnected in the subgraph")).into());
            }
        }
        gs.push((n, g));
        hs.push((n, h));
    }
    let (run, skipped_q): (Vec<usize>, Vec<usize>) = qs.iter().partition(|&&q| q > l);
    let mut h_qs: Vec<usize> = run.iter().flat_map(|&q| [q, q * l]).collect();
    h_qs.sort_unstable();
    h_qs.dedup();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &field in fields {
        let g_cells = rank_cells(&gs, &run, field, options);
        let h_cells = rank_cells(&hs, &h_qs, field, options);
        let s = |cells: &[super::RankCell], n: u64, q: usize| {
            cells.iter().find(|c| c.n == n && c.q == q).and_then(|c| c.s.clone()).ok_or(InvariantError::Timeout { n, q })
        };
        for &n in &g_seq.window {
            for &q in &run {
                let (s_q_h, s_q_g, s_ql_h) = (s(&h_cells, n, q)?, s(&g_cells, n, q)?, s(&h_cells, n, q * l)?);
                let row = InequalityRow {
                    n,
                    q,
                    field,
                    lower_holds: s_q_h >= s_q_g,
                    upper_holds: s_q_g >= s_ql_h,
                    s_q_h,
                    s_q_g,
                    s_ql_h,
                };
                if !(row.lower_holds && row.upper_holds) {
                    failures.push((n, q, field));
                }
                rows.push(row);
            }
        }
    }
    Ok(InequalityReport { l, rows, skipped_q, failures })
}
