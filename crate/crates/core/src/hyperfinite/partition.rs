use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::HyperError;
use crate::exact::Exact;
use crate::graph::metric::UNREACHED;
use crate::graph::{max_q_net, EdgeId, Graph, GraphError, VertexId};

/// A partition of the vertex set into blocks, with its cut statistics.
///
/// Block ids are canonical: blocks are numbered in order of their smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub block_of: Vec<usize>,
    pub block_count: usize,
    pub max_block_size: usize,
    pub cut_edges: Vec<EdgeId>,
    pub cut_ratio: Exact,
}

impl Partition {
    /// Builds the partition from any block labelling.
    pub fn from_labels(g: &Graph, labels: &[usize]) -> Result<Self, HyperError> {
        if labels.len() != g.vertex_count() {
            return Err(GraphError::VertexCountMismatch { left: g.vertex_count(), right: labels.len() }.into());
        }
        let mut renumber = BTreeMap::new();
        let block_of: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = renumber.len();
                *renumber.entry(*l).or_insert(next)
            })
            .collect();
        let block_count = renumber.len();
        let mut sizes = vec![0usize; block_count];
        for &b in &block_of {
            sizes[b] += 1;
        }
        let cut_edges: Vec<EdgeId> =
            g.edges().iter().enumerate().filter(|(_, &(u, w))| block_of[u] != block_of[w]).map(|(e, _)| e).collect();
        let cut_ratio = if g.vertex_count() == 0 { Exact::zero() } else { Exact::ratio(cut_edges.len(), g.vertex_count()) };
        Ok(Partition { max_block_size: sizes.iter().copied().max().unwrap_or(0), block_of, block_count, cut_edges, cut_ratio })
    }

    pub fn blocks(&self) -> Vec<Vec<VertexId>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for (v, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(v);
        }
        blocks
    }

    /// Every block induces a connected subgraph of `g`.
    pub fn blocks_connected(&self, g: &Graph) -> bool {
        let kept: Vec<EdgeId> =
            (0..g.edge_count()).filter(|&e| self.block_of[g.endpoints(e).0] == self.block_of[g.endpoints(e).1]).collect();
        g.edge_subgraph(&kept).component_count() == self.block_count
    }
}

/// Tree partition from a greedy q-net, with the merge pass that was applied.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreePartition {
    pub partition: Partition,
    pub net: Vec<VertexId>,
    /// Blocks merged into a neighbour to reach `#blocks <= |V| / q`.
    pub merges: usize,
}

/// Partition of a tree into closest-net-point blocks of a greedy maximal
/// q-net (ties to the smaller net point).
///
/// A greedy net can have more than `|V|/q` points (e.g. a maximal independent
/// set for `q = 2` on a tree with many leaves); while that happens the
/// smallest block is merged into its smallest neighbouring block.
pub fn tree_partition(t: &Graph, q: usize) -> Result<TreePartition, HyperError> {
    if !t.is_tree() {
        return Err(GraphError::NotATree.into());
    }
    if q < 2 {
        return Err(GraphError::InvalidParameter(format!("tree partition needs q >= 2, got {q}")).into());
    }
    let net = max_q_net(t, q)?;
    let n = t.vertex_count();

    // Level-synchronous multi-source BFS; a vertex takes the smallest label
    // among its neighbours one level closer.
    let mut dist = vec![UNREACHED; n];
    let mut label = vec![usize::MAX; n];
    let mut frontier: Vec<VertexId> = net.clone();
    for &x in &net {
        dist[x] = 0;
        label[x] = x;
    }
    let mut level = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for w in t.neighbors(v) {
                if dist[w] == UNREACHED {
                    dist[w] = level + 1;
                    next.push(w);
                }
                if dist[w] == level + 1 {
                    label[w] = label[w].min(label[v]);
                }
            }
        }
        frontier = next;
        level += 1;
    }

    let mut merges = 0;
    loop {
        let blocks = label.iter().collect::<std::collections::BTreeSet<_>>().len();
        if blocks < 2 || blocks * q <= n {
            break;
        }
        let mut size: BTreeMap<usize, usize> = BTreeMap::new();
        for &l in &label {
            *size.entry(l).or_default() += 1;
        }
        let (&small, _) = size.iter().min_by_key(|&(&l, &s)| (s, l)).expect("nonempty");
        let target = t
            .edges()
            .iter()
            .filter_map(|&(u, w)| match (label[u] == small, label[w] == small) {
                (true, false) => Some(label[w]),
                (false, true) => Some(label[u]),
                _ => None,
            })
            .min_by_key(|&l| (size[&l], l))
            .expect("a tree with two blocks has a cut edge");
        for l in label.iter_mut() {
            if *l == small {
                *l = target;
            }
        }
        merges += 1;
    }
    Ok(TreePartition { partition: Partition::from_labels(t, &label)?, net, merges })
}

/// Coordinates of the `n x n` torus vertex ids used by [`crate::graph::families`].
pub fn torus_coordinates(n: usize) -> Vec<Vec<usize>> {
    (0..n * n).map(|v| vec![v / n, v % n]).collect()
}

fn check_box_input(g: &Graph, coords: &[Vec<usize>], side: usize, s: usize) -> Result<(), HyperError> {
    if coords.len() != g.vertex_count() {
        return Err(GraphError::VertexCountMismatch { left: g.vertex_count(), right: coords.len() }.into());
    }
    if s == 0 || side % s != 0 {
        return Err(GraphError::InvalidParameter(format!("box side {s} must divide {side}")).into());
    }
    Ok(())
}

/// Blocks are the `s x ... x s` coordinate boxes of a torus of side `side`.
pub fn box_partition(g: &Graph, coords: &[Vec<usize>], side: usize, s: usize) -> Result<Partition, HyperError> {
    check_box_input(g, coords, side, s)?;
    let boxes_per_axis = side / s;
    let labels: Vec<usize> = coords.iter().map(|c| c.iter().fold(0, |acc, &x| acc * boxes_per_axis + x / s)).collect();
    Partition::from_labels(g, &labels)
}

/// Edges that cross a box face in the periodic tiling of the universal
/// cover, including faces that wrap around the torus. When `s < side` these
/// are exactly the cut edges of [`box_partition`]; when `s = side` they are
/// the wrap-around edges.
pub fn box_face_edges(g: &Graph, coords: &[Vec<usize>], side: usize, s: usize) -> Result<Vec<EdgeId>, HyperError> {
    check_box_input(g, coords, side, s)?;
    let (n, s) = (side as i64, s as i64);
    let crosses = |a: usize, b: usize| {
        let (a, b) = (a as i64, b as i64);
        let mut step = (b - a).rem_euclid(n);
        if step > n / 2 {
            step -= n;
        }
        (a + step).div_euclid(s) != a.div_euclid(s)
    };
    Ok((0..g.edge_count())
        .filter(|&e| {
            let (u, w) = g.endpoints(e);
            coords[u].iter().zip(&coords[w]).any(|(&a, &b)| crosses(a, b))
        })
        .collect())
}

/// `H`: a BFS spanning forest inside every block, using only edges that are
/// not in `kept`, plus all of `kept`. With `kept` the cut edges this is the
/// block-forest compression; extra kept edges may only add to it.
pub fn partition_compression(g: &Graph, p: &Partition, kept: &[EdgeId]) -> Graph {
    let mut keep = vec![false; g.edge_count()];
    for &e in p.cut_edges.iter().chain(kept) {
        keep[e] = true;
    }
    let inner: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| !keep[e]).collect();
    let inside = g.edge_subgraph(&inner);
    let mut edges: Vec<EdgeId> = inside.spanning_forest().into_iter().map(|e| inner[e]).collect();
    edges.extend((0..g.edge_count()).filter(|&e| keep[e]));
    edges.sort_unstable();
    g.edge_subgraph(&edges)
}

/// Outcome of checking a partition against `(epsilon, K)`, recomputed from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionValidation {
    pub passed: bool,
    pub max_block_size: usize,
    pub cut_ratio: Exact,
    pub block_limit: usize,
    pub epsilon: Exact,
    /// The partition's stored statistics agree with the recomputation.
    pub stats_match: bool,
}

pub fn validate_partition(g: &Graph, p: &Partition, epsilon: &Exact, block_limit: usize) -> PartitionValidation {
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for &b in &p.block_of {
        *sizes.entry(b).or_default() += 1;
    }
    let max_block_size = sizes.values().copied().max().unwrap_or(0);
    let cut = g.edges().iter().filter(|&&(u, w)| p.block_of[u] != p.block_of[w]).count();
    let cut_ratio = Exact::ratio(cut, g.vertex_count().max(1));
    let stats_match = p.block_of.len() == g.vertex_count()
        && max_block_size == p.max_block_size
        && cut == p.cut_edges.len()
        && cut_ratio == p.cut_ratio
        && sizes.len() == p.block_count;
    PartitionValidation {
        passed: stats_match && max_block_size <= block_limit && cut_ratio <= *epsilon,
        max_block_size,
        cut_ratio,
        block_limit,
        epsilon: epsilon.clone(),
        stats_match,
    }
}

/// BFS chunks of at most `limit` vertices inside the subgraph induced by `vertices`.
pub(crate) fn bfs_chunks(g: &Graph, vertices: &[VertexId], limit: usize) -> Vec<Vec<VertexId>> {
    let mut inside = vec![false; g.vertex_count()];
    for &v in vertices {
        inside[v] = true;
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    let mut chunks = Vec::new();
    for &start in &sorted {
        if !inside[start] {
            continue;
        }
        let mut chunk = Vec::new();
        let mut queue = VecDeque::from([start]);
        inside[start] = false;
        while let Some(v) = queue.pop_front() {
            chunk.push(v);
            if chunk.len() + queue.len() >= limit {
                // Put back whatever was queued beyond the limit.
                for w in queue.drain(..) {
                    if chunk.len() < limit {
                        chunk.push(w);
                    } else {
                        inside[w] = true;
                    }
                }
                break;
            }
            for w in g.neighbors(v) {
                if inside[w] {
                    inside[w] = false;
                    queue.push_back(w);
                }
            }
        }
        chunks.push(chunk);
    }
    chunks
}
