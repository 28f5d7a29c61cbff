use serde::{Deserialize, Serialize};

use super::estimates::{beta_from_graphs, edge_number_from_graphs, BetaReport, CellOptions, EdgeNumberReport, WindowStats};
use super::{GraphSequence, InvariantError};
use crate::cycles::FieldSpec;
use crate::exact::Exact;
use crate::graph::{EquivalenceWitness, Graph};
use crate::hyperfinite::{box_face_edges, box_partition, partition_compression, tree_partition};
use crate::towers::{coset_compression, QuotientFamily};

/// How an equivalent sequence with fewer edges is built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CostStrategy {
    Identity,
    /// Forests inside `s x s` boxes of a 2-dimensional torus tower, plus every
    /// edge crossing a box face of the periodic tiling.
    Boxes { s: u64 },
    /// Forests inside greedy q-net blocks of a tree sequence, plus cut edges.
    TreeNet { q: usize },
    /// Subgroup Cayley part at level `k` plus shortest-path forest.
    Coset { k: u64, words: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostRow {
    pub n: u64,
    pub vertices: u64,
    pub edges: u64,
    pub ratio: Exact,
    /// `d_H <= forward d_G` and `d_G <= backward d_H` at this index.
    pub witness: EquivalenceWitness,
    /// Strategy-specific bound checks (coset: `d_H <= L (2t + 1) d_G`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz_check: Option<LipschitzCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipschitzCheck {
    pub t: u64,
    pub l: u64,
    pub bound: u64,
    pub forest_edges: u64,
    pub subgroup_size: u64,
    pub ratio_bound: Exact,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub strategy: CostStrategy,
    pub rows: Vec<CostRow>,
    pub uniform_witness: EquivalenceWitness,
    pub stats: WindowStats,
    /// Window minimum of `e(H_n)`, emitted only when every witness is finite.
    pub bound: Option<Exact>,
}

/// The compressed graph at one index, with its extra checks.
fn compress(seq: &GraphSequence, strategy: &CostStrategy, n: u64, g: &Graph) -> Result<(Graph, Option<LipschitzCheck>), InvariantError> {
    match strategy {
        CostStrategy::Identity => Ok((g.clone(), None)),
        CostStrategy::Boxes { s } => {
            let tower = seq.tower_spec().filter(|t| t.quotients == QuotientFamily::Residues { dim: 2 });
            if tower.is_none() {
                return Err(InvariantError::Inapplicable("box compression needs a (Z/n)^2 tower".into()));
            }
            let c = seq.cayley(n)?;
            let coords: Vec<Vec<usize>> = c.elements.iter().map(|e| e.iter().map(|&x| x as usize).collect()).collect();
            let p = box_partition(g, &coords, n as usize, *s as usize)?;
            let faces = box_face_edges(g, &coords, n as usize, *s as usize)?;
            Ok((partition_compression(g, &p, &faces), None))
        }
        CostStrategy::TreeNet { q } => {
            let tp = tree_partition(g, *q)?;
            Ok((partition_compression(g, &tp.partition, &[]), None))
        }
        CostStrategy::Coset { k, words } => {
            let tower = seq.tower_spec().ok_or_else(|| InvariantError::Inapplicable("coset compression needs a tower".into()))?;
            let r = coset_compression(tower, *k, n, words)?;
            let check = LipschitzCheck {
                t: r.t,
                l: r.l,
                bound: r.lipschitz_bound(),
                forest_edges: r.forest_edges,
                subgroup_size: r.subgroup_size,
                ratio_bound: r.bound.clone(),
                holds: r.bound_holds() && r.forest_edges == r.vertex_count - r.subgroup_size,
            };
            Ok((r.graph, Some(check)))
        }
    }
}

/// Builds `H_n` for every index with an equivalence witness against `G_n`.
pub fn cost_upper_bound(seq: &GraphSequence, strategy: &CostStrategy) -> Result<CostReport, InvariantError> {
    let graphs = seq.graphs()?;
    let mut rows = Vec::with_capacity(graphs.len());
    let mut uniform: Option<EquivalenceWitness> = None;
    for (n, g) in &graphs {
        let (h, lipschitz_check) = compress(seq, strategy, *n, g)?;
        let mut witness = EquivalenceWitness::between(g, &h)?;
        witness.verified_indices = vec![*n];
        uniform = Some(uniform.map_or(witness.clone(), |u| u.merge(&witness)));
        rows.push(CostRow {
            n: *n,
            vertices: h.vertex_count() as u64,
            edges: h.edge_count() as u64,
            ratio: Exact::ratio(h.edge_count(), h.vertex_count().max(1)),
            witness,
            lipschitz_check,
        });
    }
    let uniform_witness = uniform.ok_or(InvariantError::EmptyWindow)?;
    let ratios: Vec<Exact> = rows.iter().map(|r| r.ratio.clone()).collect();
    let stats = WindowStats::of(&ratios).ok_or(InvariantError::EmptyWindow)?;
    let bound = uniform_witness.is_finite().then(|| stats.window_min.clone());
    Ok(CostReport { strategy: strategy.clone(), rows, uniform_witness, stats, bound })
}

/// Field comparison used throughout: for integer vectors, rank over `F_p`
/// never exceeds rank over `Q`, so `s_q(Q) <= s_q(F_p)` cell by cell.
pub const FIELD_DIRECTION_NOTE: &str =
    "rank over F_p of integer cycle vectors never exceeds their rank over Q; checked as s_q(Q) <= s_q(F_p) in every cell";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldComparison {
    pub n: u64,
    pub q: usize,
    pub prime: u64,
    pub s_rationals: Exact,
    pub s_prime: Exact,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRow {
    pub field: FieldSpec,
    pub beta_proxy: Option<Exact>,
    pub cost_bound_minus_one: Option<Exact>,
    pub gap: Option<Exact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub note: String,
    pub edge_number: EdgeNumberReport,
    pub betas: Vec<BetaReport>,
    pub costs: Vec<CostReport>,
    pub comparisons: Vec<FieldComparison>,
    pub comparisons_hold: bool,
    pub best_cost_bound: Option<Exact>,
    pub gaps: Vec<GapRow>,
    /// Per index: β proxy of that single index, cost bound − 1, gap, per field.
    pub per_n: Vec<PerIndexGap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerIndexGap {
    pub n: u64,
    pub field: FieldSpec,
    pub min_s: Option<Exact>,
    pub cost_minus_one: Exact,
    pub gap: Option<Exact>,
}

/// `β_Q <= β_{F_p} <= c - 1` at finite scale: field comparisons per cell,
/// β proxies per field, the best certified cost bound, and the gaps.
pub fn sandwich_report(
    seq: &GraphSequence,
    primes: &[u64],
    q_max: usize,
    strategies: &[CostStrategy],
    options: CellOptions,
) -> Result<SandwichReport, InvariantError> {
    let graphs = seq.graphs()?;
    let edge_number = edge_number_from_graphs(&graphs)?;
    let mut fields = vec![FieldSpec::Rationals];
    for &p in primes {
        fields.push(FieldSpec::prime(p).map_err(|e| InvariantError::Inapplicable(e.to_string()))?);
    }
    let betas: Vec<BetaReport> = fields.iter().map(|&f| beta_from_graphs(&graphs, f, q_max, options)).collect::<Result<_, _>>()?;

    let mut comparisons = Vec::new();
    for beta_p in &betas[1..] {
        for cell in &beta_p.cells {
            let q_cell = betas[0].cell(cell.n, cell.q);
            if let (Some(sq), Some(sp)) = (q_cell.and_then(|c| c.s.clone()), cell.s.clone()) {
                comparisons.push(FieldComparison {
                    n: cell.n,
                    q: cell.q,
                    prime: beta_p.field.characteristic(),
                    holds: sq <= sp,
                    s_rationals: sq,
                    s_prime: sp,
                });
            }
        }
    }
    let comparisons_hold = comparisons.iter().all(|c| c.holds);

    let mut all = vec![CostStrategy::Identity];
    all.extend(strategies.iter().filter(|s| **s != CostStrategy::Identity).cloned());
    let costs: Vec<CostReport> = all.iter().map(|s| cost_upper_bound(seq, s)).collect::<Result<_, _>>()?;
    let best_cost_bound = costs.iter().filter_map(|c| c.bound.clone()).min();
    let cost_minus_one = best_cost_bound.clone().map(|b| b - Exact::one());

    let gaps = betas
        .iter()
        .map(|b| GapRow {
            field: b.field,
            beta_proxy: b.beta_proxy.clone(),
            cost_bound_minus_one: cost_minus_one.clone(),
            gap: match (&cost_minus_one, &b.beta_proxy) {
                (Some(c), Some(beta)) => Some(c - beta),
                _ => None,
            },
        })
        .collect();

    let mut per_n = Vec::new();
    for b in &betas {
        for (n, _) in &graphs {
            let min_s = b.cells.iter().filter(|c| c.n == *n).filter_map(|c| c.s.clone()).min();
            // Best per-index compression ratio among certified strategies.
            let cost = costs
                .iter()
                .filter(|c| c.bound.is_some())
                .filter_map(|c| c.rows.iter().find(|r| r.n == *n).map(|r| r.ratio.clone()))
                .min()
                .expect("identity is always certified");
            let cost_minus_one = cost - Exact::one();
            per_n.push(PerIndexGap { n: *n, field: b.field, gap: min_s.as_ref().map(|s| &cost_minus_one - s), min_s, cost_minus_one });
        }
    }

    Ok(SandwichReport {
        note: FIELD_DIRECTION_NOTE.to_string(),
        edge_number,
        betas,
        costs,
        comparisons,
        comparisons_hold,
        best_cost_bound,
        gaps,
        per_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Lipschitz;

    #[test]
    fn identity_is_edge_number() {
        let t = GraphSequence::named("torus2", vec![4, 5], 0).unwrap();
        let r = cost_upper_bound(&t, &CostStrategy::Identity).unwrap();
        assert_eq!(r.bound, Some(Exact::from_int(2)));
        assert_eq!(r.uniform_witness.forward, Lipschitz::Finite(1));
    }

    #[test]
    fn torus_boxes() {
        let t = GraphSequence::named("torus2", vec![8, 16], 0).unwrap();
        let r = cost_upper_bound(&t, &CostStrategy::Boxes { s: 8 }).unwrap();
        assert!(r.rows.iter().all(|row| row.ratio == Exact::new(79, 64)));
        assert_eq!(r.bound, Some(Exact::new(79, 64)));
        assert!(r.uniform_witness.is_finite());
        let t16 = GraphSequence::named("torus2", vec![16], 0).unwrap();
        let r16 = cost_upper_bound(&t16, &CostStrategy::Boxes { s: 16 }).unwrap();
        assert_eq!(r16.bound, Some(Exact::one() - Exact::new(1, 256) + Exact::new(1, 8)));
        assert!(cost_upper_bound(&GraphSequence::named("cycle", vec![8], 0).unwrap(), &CostStrategy::Boxes { s: 4 }).is_err());
    }

    #[test]
    fn coset_on_z() {
        let z = GraphSequence::named("z-tower", vec![8, 12, 16, 20], 0).unwrap();
        let r = cost_upper_bound(&z, &CostStrategy::Coset { k: 4, words: vec!["a^4".into()] }).unwrap();
        for row in &r.rows {
            let check = row.lipschitz_check.as_ref().unwrap();
            assert_eq!(check.ratio_bound, Exact::new(5, 4));
            assert!(row.ratio <= check.ratio_bound);
            assert!(check.holds, "n={} {check:?} {:?}", row.n, row.witness);
        }
        assert!(r.bound.is_some());
    }

    #[test]
    fn tree_net_on_trees() {
        let t = GraphSequence::named("random-tree", vec![50, 100], 4).unwrap();
        let r = cost_upper_bound(&t, &CostStrategy::TreeNet { q: 4 }).unwrap();
        // A tree compresses to itself.
        assert!(r.rows.iter().all(|row| row.edges == row.vertices - 1));
    }

    #[test]
    fn sandwich_on_large_girth() {
        let k = GraphSequence::named("random-cubic", vec![200, 300], 1).unwrap();
        let r = sandwich_report(&k, &[2, 3], 8, &[], CellOptions::default()).unwrap();
        assert!(r.comparisons_hold);
        assert_eq!(r.best_cost_bound, Some(Exact::new(3, 2)));
        assert!(r.gaps.iter().all(|g| g.gap == Some(Exact::zero())));
    }

    #[test]
    fn sandwich_on_torus() {
        let t = GraphSequence::named("torus2", vec![8, 16], 0).unwrap();
        let r = sandwich_report(&t, &[2], 4, &[CostStrategy::Boxes { s: 8 }], CellOptions::default()).unwrap();
        assert!(r.comparisons_hold);
        assert_eq!(r.best_cost_bound, Some(Exact::new(79, 64)));
        let gap = r.gaps[0].gap.clone().unwrap();
        assert_eq!(gap, Exact::new(15, 64) - Exact::new(1, 256));
    }
}
