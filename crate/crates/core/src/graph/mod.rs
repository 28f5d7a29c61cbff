//! Finite simple graphs with a fixed global edge orientation.
//!
//! Every edge is stored as `(low, high)` and traversing it from `low` to
//! `high` has sign `+1`. All cycle vectors built elsewhere in the crate use
//! this orientation, so signs are reproducible across runs.

mod io;
pub(crate) mod metric;
pub mod random;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{parse_edge_list, read_edge_list, write_edge_list};
pub use metric::{domination_constant, max_q_net, Lipschitz};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge pair {index} is a loop at vertex {vertex}")]
    Loop { index: usize, vertex: VertexId },
    #[error("edge pair {index} duplicates edge {first} ({u}, {w})")]
    DuplicateEdge { index: usize, first: usize, u: VertexId, w: VertexId },
    #[error("edge pair {index} references vertex {vertex} outside 0..{vertex_count}")]
    VertexOutOfRange { index: usize, vertex: VertexId, vertex_count: usize },
    #[error("vertex count mismatch: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// One end of an edge as seen from a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: VertexId,
    pub edge: EdgeId,
    /// `+1` when moving along the stored orientation (low to high).
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<Incidence>>,
    max_degree: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Graph {
    /// Builds a graph whose edge ids follow the input order.
    pub fn new(vertex_count: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(pairs.len());
        let mut seen: HashMap<(VertexId, VertexId), usize> = HashMap::with_capacity(pairs.len());
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (index, &(u, w)) in pairs.iter().enumerate() {
            for vertex in [u, w] {
                if vertex >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { index, vertex, vertex_count });
                }
            }
            if u == w {
                return Err(GraphError::Loop { index, vertex: u });
            }
            let key = (u.min(w), u.max(w));
            if let Some(&first) = seen.get(&key) {
                return Err(GraphError::DuplicateEdge { index, first, u, w });
            }
            let id = edges.len();
            seen.insert(key, id);
            edges.push(key);
            adjacency[key.0].push(Incidence { neighbor: key.1, edge: id, sign: 1 });
            adjacency[key.1].push(Incidence { neighbor: key.0, edge: id, sign: -1 });
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph { vertex_count, edges, adjacency, max_degree })
    }

    /// Builds a graph from pairs that may repeat or contain loops; loops are
    /// dropped and repeats merged, keeping first-occurrence order.
    pub fn from_pairs_dedup(vertex_count: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashSet::new();
        let mut kept = Vec::new();
        for (u, w) in pairs {
            if u == w {
                continue;
            }
            if seen.insert((u.min(w), u.max(w))) {
                kept.push((u, w));
            }
        }
        Graph::new(vertex_count, &kept)
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph { vertex_count, edges: Vec::new(), adjacency: vec![Vec::new(); vertex_count], max_degree: 0 }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(low, high)` in id order.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: EdgeId) -> (VertexId, VertexId) {
        self.edges[edge]
    }

    pub fn incidences(&self, v: VertexId) -> &[Incidence] {
        &self.adjacency[v]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().map(|inc| inc.neighbor)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Edge id joining `u` and `w`, if any.
    pub fn edge_between(&self, u: VertexId, w: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(w) { (u, w) } else { (w, u) };
        self.adjacency[a].iter().find(|inc| inc.neighbor == b).map(|inc| inc.edge)
    }

    /// Component label per vertex; labels are numbered by lowest vertex id.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..self.vertex_count {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = count;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.component_count() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count >= 1 && self.is_connected() && self.edge_count() + 1 == self.vertex_count
    }

    /// Union on the same vertex set: this graph's edges keep their ids, edges
    /// only present in `other` follow in `other`'s order.
    pub fn union(&self, other: &Graph) -> Result<Graph, GraphError> {
        if self.vertex_count != other.vertex_count {
            return Err(GraphError::VertexCountMismatch { left: self.vertex_count, right: other.vertex_count });
        }
        let mut pairs = self.edges.clone();
        pairs.extend(other.edges.iter().copied().filter(|&(u, w)| self.edge_between(u, w).is_none()));
        Graph::new(self.vertex_count, &pairs)
    }

    /// True when every edge of `self` is an edge of `other` (same vertex count).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertex_count == other.vertex_count && self.edges.iter().all(|&(u, w)| other.edge_between(u, w).is_some())
    }

    /// Subgraph on the same vertices keeping the listed edges (ids renumbered
    /// in the order given).
    pub fn edge_subgraph(&self, edges: &[EdgeId]) -> Graph {
        let pairs: Vec<_> = edges.iter().map(|&e| self.edges[e]).collect();
        Graph::new(self.vertex_count, &pairs).expect("subset of a simple graph is simple")
    }

    /// Sorted edge set, for order-insensitive comparisons.
    pub fn edge_set(&self) -> Vec<(VertexId, VertexId)> {
        let mut set = self.edges.clone();
        set.sort_unstable();
        set
    }
}

/// Equivalence constants between two graphs on the same vertex set.
///
/// `forward` is the least `L` with `d_second <= L * d_first`, i.e. the
/// largest distance in the second graph between the ends of an edge of the
/// first; `backward` is the same with the roles swapped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub forward: Lipschitz,
    pub backward: Lipschitz,
    pub verified_indices: Vec<u64>,
}

impl EquivalenceWitness {
    /// Witness for a single pair of graphs.
    pub fn between(first: &Graph, second: &Graph) -> Result<Self, GraphError> {
        Ok(EquivalenceWitness {
            forward: domination_constant(second, first)?,
            backward: domination_constant(first, second)?,
            verified_indices: Vec::new(),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.forward.is_finite() && self.backward.is_finite()
    }

    /// Uniform witness over several indices: the worse constant each way.
    pub fn merge(&self, other: &EquivalenceWitness) -> EquivalenceWitness {
        let mut verified_indices = self.verified_indices.clone();
        verified_indices.extend(other.verified_indices.iter().copied());
        EquivalenceWitness {
            forward: self.forward.max(other.forward),
            backward: self.backward.max(other.backward),
            verified_indices,
        }
    }
}

/// Standard families used across tests, examples and the CLI.
pub mod families {
    use super::{Graph, VertexId};

    pub fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &pairs).expect("cycle with n >= 3")
    }

    pub fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &pairs).expect("path")
    }

    pub fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Graph::new(n, &pairs).expect("complete graph")
    }

    /// Star with center 0.
    pub fn star(leaves: usize) -> Graph {
        let pairs: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves + 1, &pairs).expect("star")
    }

    pub fn petersen() -> Graph {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::new(10, &pairs).expect("petersen")
    }

    /// Vertex id of `(x, y)` on the `n x n` torus.
    pub fn torus_vertex(n: usize, x: usize, y: usize) -> VertexId {
        (x % n) * n + (y % n)
    }

    /// `(Z/n)^2` with steps `(1,0)` and `(0,1)`; `n >= 3`.
    pub fn torus2(n: usize) -> Graph {
        torus_with_steps(n, &[(1, 0), (0, 1)])
    }

    /// Torus plus the `(1,1)` diagonals.
    pub fn torus2_diagonal(n: usize) -> Graph {
        torus_with_steps(n, &[(1, 0), (0, 1), (1, 1)])
    }

    /// Translation-invariant graph on `(Z/n)^2` with the given steps; merged
    /// duplicates and loops are dropped.
    pub fn torus_with_steps(n: usize, steps: &[(usize, usize)]) -> Graph {
        let mut pairs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for &(dx, dy) in steps {
                    pairs.push((torus_vertex(n, x, y), torus_vertex(n, x + dx, y + dy)));
                }
            }
        }
        Graph::from_pairs_dedup(n * n, pairs).expect("torus")
    }

    /// Disjoint union of the given graphs, relabelled consecutively.
    pub fn disjoint_union(parts: &[Graph]) -> Graph {
        let mut offset = 0;
        let mut pairs = Vec::new();
        for g in parts {
            pairs.extend(g.edges().iter().map(|&(u, w)| (u + offset, w + offset)));
            offset += g.vertex_count();
        }
        Graph::new(offset, &pairs).expect("disjoint union")
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn triangle_basics() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.endpoints(2), (0, 2));
    }

    #[test]
    fn path_p4() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.max_degree(), 2);
        assert!(g.is_tree());
    }

    #[test]
    fn torus_edge_count_matches_enumeration() {
        // Oracle: count unordered neighbour pairs {v, v+e1}, {v, v+e2} directly.
        let n = 4;
        let mut pairs = std::collections::BTreeSet::new();
        for x in 0..n {
            for y in 0..n {
                let v = x * n + y;
                for (dx, dy) in [(1, 0), (0, 1)] {
                    let w = ((x + dx) % n) * n + (y + dy) % n;
                    pairs.insert((v.min(w), v.max(w)));
                }
            }
        }
        assert_eq!(pairs.len(), 2 * n * n);
        let g = torus2(n);
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.edge_count(), pairs.len());
        assert!((0..16).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn rejects_bad_pairs_with_index() {
        assert_eq!(Graph::new(3, &[(0, 1), (2, 2)]), Err(GraphError::Loop { index: 1, vertex: 2 }));
        assert_eq!(
            Graph::new(3, &[(0, 1), (1, 2), (1, 0)]),
            Err(GraphError::DuplicateEdge { index: 2, first: 0, u: 1, w: 0 })
        );
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { index: 0, vertex: 3, vertex_count: 3 })
        );
    }

    #[test]
    fn adjacency_signs_are_opposite() {
        let g = petersen();
        let mut seen = vec![0i32; g.edge_count()];
        let mut count = vec![0; g.edge_count()];
        for v in 0..g.vertex_count() {
            for inc in g.incidences(v) {
                seen[inc.edge] += inc.sign as i32;
                count[inc.edge] += 1;
                let (lo, hi) = g.endpoints(inc.edge);
                if inc.sign == 1 {
                    assert_eq!((v, inc.neighbor), (lo, hi));
                } else {
                    assert_eq!((v, inc.neighbor), (hi, lo));
                }
            }
        }
        assert!(seen.iter().all(|&s| s == 0));
        assert!(count.iter().all(|&c| c == 2));
    }

    #[test]
    fn union_examples() {
        let g = petersen();
        assert_eq!(g.union(&g).unwrap(), g);

        let c4 = cycle(4);
        let diagonals = Graph::new(4, &[(0, 2), (1, 3)]).unwrap();
        let k4 = c4.union(&diagonals).unwrap();
        assert_eq!(k4.edge_set(), complete(4).edge_set());
        assert_eq!(&k4.edges()[..4], c4.edges());

        let n = 5;
        let both = torus2(n).union(&torus_with_steps(n, &[(1, 1)])).unwrap();
        assert_eq!(both.edge_count(), 3 * n * n);
        assert!((0..n * n).all(|v| both.degree(v) == 6));

        let mismatch = cycle(4).union(&cycle(5));
        assert!(matches!(mismatch, Err(GraphError::VertexCountMismatch { .. })));
    }

    #[test]
    fn torus_union_with_full_diagonals_is_eight_regular() {
        // Oracle: the union of {±e1, ±e2} and {±(e1+e2), ±(e1-e2)} edge sets
        // has 4 n^2 edges and degree 8.
        let n = 6;
        let diag = torus_with_steps(n, &[(1, 1), (1, n - 1)]);
        let u = torus2(n).union(&diag).unwrap();
        assert_eq!(u.edge_count(), 4 * n * n);
        assert!((0..n * n).all(|v| u.degree(v) == 8));
    }

    #[test]
    fn components() {
        let g = disjoint_union(&[cycle(3), cycle(3), path(1)]);
        assert_eq!(g.component_count(), 3);
        assert!(!g.is_connected());
    }
}
