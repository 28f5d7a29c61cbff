//! Spans of short cycles: `dim_K C^q_K(G)` and the derived `s^q_K(G)`.

mod accumulator;
mod enumerate;
mod field;

use std::time::Instant;

use thiserror::Error;

pub use accumulator::CycleAccumulator;
pub use enumerate::{enumerate_short_cycles, CycleVector, ShortCycles};
pub use field::{is_prime, FieldError, FieldSpec};

use crate::exact::Exact;
use crate::graph::Graph;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("cell deadline exceeded after {cycles_seen} cycles")]
pub struct Timeout {
    pub cycles_seen: u64,
}

/// `|E| - |V| + #components`.
pub fn cyclomatic_number(g: &Graph) -> usize {
    g.edge_count() + g.component_count() - g.vertex_count()
}

/// Dimension of the span of all cycles of length at most `q`.
pub fn cycle_rank(g: &Graph, q: usize, field: FieldSpec) -> usize {
    cycle_rank_until(g, q, field, None).expect("no deadline")
}

/// [`cycle_rank`] that gives up once `deadline` has passed.
///
/// Stops early as soon as the rank reaches the cyclomatic number.
pub fn cycle_rank_until(g: &Graph, q: usize, field: FieldSpec, deadline: Option<Instant>) -> Result<usize, Timeout> {
    let cap = cyclomatic_number(g);
    let mut acc = CycleAccumulator::new(field, cap);
    if cap == 0 {
        return Ok(0);
    }
    let mut seen = 0u64;
    for cycle in enumerate_short_cycles(g, q) {
        acc.push_cycle(&cycle);
        seen += 1;
        if acc.is_saturated() {
            break;
        }
        if seen % 256 == 0 && deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Timeout { cycles_seen: seen });
        }
    }
    Ok(acc.rank())
}

/// `(|E| - rank) / |V| - 1` for a given cycle rank.
pub fn s_from_rank(g: &Graph, rank: usize) -> Exact {
    assert!(g.vertex_count() > 0, "s_q needs a nonempty vertex set");
    Exact::ratio(g.edge_count() - rank, g.vertex_count()) - Exact::one()
}

/// `(|E| - dim C^q) / |V| - 1` as an exact rational.
pub fn s_q(g: &Graph, q: usize, field: FieldSpec) -> Exact {
    s_from_rank(g, cycle_rank(g, q, field))
}
