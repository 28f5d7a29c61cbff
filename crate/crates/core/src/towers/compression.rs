use serde::Serialize;

use super::{cayley_graph, evaluate_with, TowerError, TowerSpec};
use crate::exact::Exact;
use crate::graph::metric::UNREACHED;
use crate::graph::{EquivalenceWitness, Graph, Lipschitz, VertexId};

/// Compressed graph `H_n` for `Γ_k ⊇ Γ_n` together with every quantity the
/// Lipschitz bound `d_H <= L (2t + 1) d_G` is built from.
#[derive(Clone, Debug, Serialize)]
pub struct CompressionReport {
    pub k: u64,
    pub n: u64,
    /// `|Γ : Γ_k|`.
    pub subgroup_index: u64,
    /// `|Γ_k / Γ_n|`, the vertices of the subgroup part.
    pub subgroup_size: u64,
    pub subgroup_edges: u64,
    pub forest_edges: u64,
    pub vertex_count: u64,
    pub edge_count: u64,
    pub edge_ratio: Exact,
    /// `1 + |T| / |Γ : Γ_k|`.
    pub bound: Exact,
    /// Largest distance in `G_n` from a vertex to the subgroup part.
    pub t: u64,
    /// `max ⌈d_T(u, v) / d_G(u, v)⌉` over distinct subgroup vertices.
    pub l: u64,
    /// `forward`: `d_H <= forward d_G`; `backward`: `d_G <= backward d_H`.
    pub witness: EquivalenceWitness,
    #[serde(skip)]
    pub graph: Graph,
    #[serde(skip)]
    pub cayley: Graph,
}

impl CompressionReport {
    /// `L (2t + 1)`.
    pub fn lipschitz_bound(&self) -> u64 {
        self.l * (2 * self.t + 1)
    }

    pub fn bound_holds(&self) -> bool {
        matches!(self.witness.forward, Lipschitz::Finite(c) if c as u64 <= self.lipschitz_bound())
    }
}

/// Builds `H_n`: Cayley edges of `Γ_k/Γ_n` for the words `subgroup_words`
/// plus, for each vertex outside, the first edge of its lexicographically
/// least shortest path to `Γ_k/Γ_n` (length first, then vertex ids).
pub fn coset_compression(tower: &TowerSpec, k: u64, n: u64, subgroup_words: &[String]) -> Result<CompressionReport, TowerError> {
    let family = &tower.quotients;
    if n <= k || !family.is_nested(k, n) {
        return Err(TowerError::NotNested { k, n });
    }
    let c = cayley_graph(tower, n)?;
    let g = &c.graph;
    let subgroup_index = cayley_graph(tower, k)?.index() as u64;

    let members: Vec<VertexId> = (0..c.index())
        .filter(|&v| family.project(&c.elements[v], k).is_some_and(|x| x == family.identity()))
        .collect();

    let images: Vec<_> = tower.generators.iter().map(|s| family.reduce(&s.image, n)).collect::<Result<_, _>>()?;
    let mut t_steps = Vec::with_capacity(subgroup_words.len());
    for text in subgroup_words {
        let word = tower.parse_word(text)?;
        let x = evaluate_with(family, &images, &word, n);
        if family.project(&x, k).as_ref() != Some(&family.identity()) {
            return Err(TowerError::NotInSubgroup { word: text.clone(), k });
        }
        t_steps.push(word);
    }

    let c_ref = &c;
    let t_pairs: Vec<(VertexId, VertexId)> =
        members.iter().flat_map(|&v| t_steps.iter().map(move |w| (v, c_ref.walk(v, w)))).filter(|(u, w)| u != w).collect();
    let t_graph = Graph::from_pairs_dedup(c.index(), t_pairs.iter().copied())?;

    // Connectivity of the T-part on the members.
    let reach = t_graph.distances_from(members[0]);
    let reached = members.iter().filter(|&&v| reach[v] != UNREACHED).count();
    if reached != members.len() {
        return Err(TowerError::NotGenerating { k, n, reached, size: members.len() });
    }

    let dist = g.distances_to_set(&members);
    let t = *dist.iter().max().expect("nonempty") as u64;
    let forest: Vec<(VertexId, VertexId)> = (0..c.index())
        .filter(|&v| dist[v] > 0)
        .map(|v| {
            let next = g.neighbors(v).filter(|&w| dist[w] + 1 == dist[v]).min().expect("shortest path step");
            (v, next)
        })
        .collect();

    let subgroup_edges = t_graph.edge_count() as u64;
    let forest_edges = forest.len() as u64;
    let h = Graph::from_pairs_dedup(c.index(), t_graph.edges().iter().copied().chain(forest))?;
    debug_assert_eq!(h.edge_count() as u64, subgroup_edges + forest_edges);

    let mut l = 1u64;
    for (i, &u) in members.iter().enumerate() {
        let dt = t_graph.distances_from(u);
        let dg = g.distances_from(u);
        for &v in &members[i + 1..] {
            l = l.max(dt[v].div_ceil(dg[v]) as u64);
        }
    }

    let witness = EquivalenceWitness::between(g, &h)?;
    let vertex_count = c.index() as u64;
    Ok(CompressionReport {
        k,
        n,
        subgroup_index,
        subgroup_size: members.len() as u64,
        subgroup_edges,
        forest_edges,
        vertex_count,
        edge_count: h.edge_count() as u64,
        edge_ratio: Exact::ratio(h.edge_count(), c.index()),
        bound: Exact::one() + Exact::ratio(subgroup_words.len(), subgroup_index as usize),
        t,
        l,
        witness,
        graph: h,
        cayley: c.graph.clone(),
    })
}
