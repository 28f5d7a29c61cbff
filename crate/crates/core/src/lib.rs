//! Combinatorial invariants of bounded-degree graph sequences.
//!
//! The crate computes cycle-space ranks spanned by short cycles over `Q` and
//! `F_p`, the derived `s^q` and beta statistics, edge numbers and witnessed
//! cost upper bounds, hyperfinite partitions and small-set expansion, and
//! cross-checks all of it on Cayley graphs of finite quotients of residually
//! finite groups.
//!
//! Every reported number is exact: ranks come from exact elimination and all
//! ratios are [`Exact`] rationals.

pub mod cycles;
pub mod exact;
pub mod graph;
pub mod hyperfinite;
pub mod invariants;
pub mod parallel;
pub mod towers;

pub use cycles::{cycle_rank, cyclomatic_number, enumerate_short_cycles, s_q, CycleAccumulator, CycleVector, FieldSpec};
pub use exact::Exact;
pub use graph::{domination_constant, max_q_net, EquivalenceWitness, Girth, Graph, GraphError, Lipschitz};
