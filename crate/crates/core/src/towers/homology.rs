use serde::{Deserialize, Serialize};

use super::{cayley_graph, CayleyGraph, TowerError, TowerSpec, Word};
use crate::cycles::{cyclomatic_number, CycleAccumulator, FieldSpec};
use crate::exact::Exact;

/// `dim_{F_p} H_1(Γ_n, F_p)` computed from the quotient Cayley graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub n: u64,
    pub index: u64,
    pub prime: u64,
    pub dim_p: u64,
    pub cyclomatic: u64,
    /// Rank over `F_p` of all relator lifts.
    pub relator_rank: u64,
    pub gradient_term: Exact,
    /// The simple Cayley graph is not the Schreier graph (loops or merged
    /// edges); `dim_p` is then reported as 0 and carries no information.
    pub degenerate: bool,
}

/// Signed edge vector of the closed walk reading `word` from `start`.
fn lift(c: &CayleyGraph, start: usize, word: &Word) -> Vec<(u32, i64)> {
    let mut v = start;
    let mut entries = Vec::with_capacity(word.len());
    for &(g, sign) in word {
        let w = if sign > 0 { c.right[v][g] } else { c.right_inv[v][g] };
        let e = c.graph.edge_between(v, w).expect("non-degenerate Cayley graph has every labelled edge");
        entries.push((e as u32, if v < w { 1 } else { -1 }));
        v = w;
    }
    debug_assert_eq!(v, start, "relators lift to closed walks");
    entries
}

/// `(|E| - |V| + 1) - rank_{F_p}(relator lifts at every vertex)`.
///
/// An empty relator list means `Γ` is free, and the result is the
/// cyclomatic number.
pub fn schreier_homology_dim(tower: &TowerSpec, n: u64, p: u64) -> Result<HomologyReport, TowerError> {
    let field = FieldSpec::prime(p).map_err(|e| TowerError::BadParameter { n, reason: e.to_string() })?;
    let relators = tower.relators.as_ref().ok_or_else(|| TowerError::MissingRelators(tower.family_name.clone()))?;
    let words = relators.iter().map(|r| tower.parse_word(r)).collect::<Result<Vec<_>, _>>()?;
    let c = cayley_graph(tower, n)?;
    let index = c.index() as u64;
    let cyclomatic = cyclomatic_number(&c.graph) as u64;
    let degenerate = c.degenerate || index == 1;
    if degenerate {
        return Ok(HomologyReport {
            n,
            index,
            prime: p,
            dim_p: 0,
            cyclomatic,
            relator_rank: 0,
            gradient_term: Exact::zero(),
            degenerate,
        });
    }
    let mut acc = CycleAccumulator::new(field, cyclomatic as usize);
    'outer: for word in &words {
        for v in 0..c.index() {
            acc.push(lift(&c, v, word));
            if acc.is_saturated() {
                break 'outer;
            }
        }
    }
    let relator_rank = acc.rank() as u64;
    let dim_p = cyclomatic - relator_rank;
    Ok(HomologyReport {
        n,
        index,
        prime: p,
        dim_p,
        cyclomatic,
        relator_rank,
        gradient_term: Exact::ratio(dim_p as usize, index as usize),
        degenerate,
    })
}
