use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, VertexId};

/// Signed incidence vector of a simple cycle in the global edge orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleVector {
    /// Vertex sequence `x_1, ..., x_L` (the cycle closes back to `x_1`).
    pub vertices: Vec<VertexId>,
    /// `(edge, ±1)` sorted by edge id.
    pub entries: Vec<(EdgeId, i8)>,
}

impl CycleVector {
    /// Builds the vector of the closed walk through `vertices`.
    pub fn from_vertices(g: &Graph, vertices: Vec<VertexId>) -> Self {
        let len = vertices.len();
        let mut entries = Vec::with_capacity(len);
        for i in 0..len {
            let (a, b) = (vertices[i], vertices[(i + 1) % len]);
            let e = g.edge_between(a, b).expect("consecutive cycle vertices are adjacent");
            entries.push((e, if a < b { 1 } else { -1 }));
        }
        entries.sort_unstable_by_key(|&(e, _)| e);
        CycleVector { vertices, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Signed boundary at every vertex is zero.
    pub fn boundary_is_zero(&self, g: &Graph) -> bool {
        let mut boundary = std::collections::HashMap::new();
        for &(e, c) in &self.entries {
            let (lo, hi) = g.endpoints(e);
            *boundary.entry(hi).or_insert(0i64) += c as i64;
            *boundary.entry(lo).or_insert(0i64) -= c as i64;
        }
        boundary.values().all(|&b| b == 0)
    }
}

/// Lazily enumerates every simple cycle of length at most `max_len`, each
/// exactly once, in nondecreasing length order.
///
/// A cycle is emitted rooted at its minimum vertex and oriented so that the
/// second vertex is the smaller of the root's two cycle neighbours. For each
/// length the search runs root by root; paths are cut as soon as the
/// remaining distance back to the root (within vertices above the root)
/// cannot close the cycle in time.
pub struct ShortCycles<'g> {
    graph: &'g Graph,
    max_len: usize,
    len: usize,
    root: VertexId,
    pending: VecDeque<CycleVector>,
    dist: Vec<usize>,
    touched: Vec<VertexId>,
    on_path: Vec<bool>,
}

pub fn enumerate_short_cycles(g: &Graph, max_len: usize) -> ShortCycles<'_> {
    ShortCycles {
        graph: g,
        max_len,
        len: 3,
        root: 0,
        pending: VecDeque::new(),
        dist: vec![usize::MAX; g.vertex_count()],
        touched: Vec::new(),
        on_path: vec![false; g.vertex_count()],
    }
}

impl ShortCycles<'_> {
    /// Length of the cycles currently being produced.
    pub fn current_length(&self) -> usize {
        self.len
    }

    fn search_root(&mut self) {
        let g = self.graph;
        let root = self.root;
        let len = self.len;
        // Distances from the root inside the subgraph on vertices >= root,
        // capped at half the target length (beyond that no closing is possible).
        let cap = len / 2;
        self.dist[root] = 0;
        self.touched.push(root);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            if self.dist[v] >= cap {
                continue;
            }
            for w in g.neighbors(v) {
                if w > root && self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[v] + 1;
                    self.touched.push(w);
                    queue.push_back(w);
                }
            }
        }

        let mut path = vec![root];
        self.on_path[root] = true;
        self.extend(&mut path);
        self.on_path[root] = false;

        for &v in &self.touched {
            self.dist[v] = usize::MAX;
        }
        self.touched.clear();
    }

    fn extend(&mut self, path: &mut Vec<VertexId>) {
        let g = self.graph;
        let root = path[0];
        let v = *path.last().unwrap();
        let edges_so_far = path.len() - 1;
        if path.len() == self.len {
            // Close the cycle; the direction rule keeps one of the two traversals.
            if path[1] < v && g.edge_between(v, root).is_some() {
                self.pending.push_back(CycleVector::from_vertices(g, path.clone()));
            }
            return;
        }
        for i in 0..g.degree(v) {
            let w = g.incidences(v)[i].neighbor;
            if w <= root || self.on_path[w] {
                continue;
            }
            // The remaining walk from w back to the root needs dist[w] edges.
            let remaining = self.dist[w];
            let remaining = if remaining == usize::MAX { self.len } else { remaining };
            if edges_so_far + 1 + remaining > self.len {
                continue;
            }
            self.on_path[w] = true;
            path.push(w);
            self.extend(path);
            path.pop();
            self.on_path[w] = false;
        }
    }
}

impl Iterator for ShortCycles<'_> {
    type Item = CycleVector;

    fn next(&mut self) -> Option<CycleVector> {
        loop {
            if let Some(c) = self.pending.pop_front() {
                return Some(c);
            }
            if self.len > self.max_len || self.graph.vertex_count() < 3 {
                return None;
            }
            if self.root >= self.graph.vertex_count() {
                self.root = 0;
                self.len += 1;
                continue;
            }
            self.search_root();
            self.root += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::graph::families::*;

    /// Oracle: grow every vertex sequence of distinct adjacent vertices from
    /// every start, keep the closed ones, canonicalise. Vertex subsets are not
    /// enough here since one subset can carry several cycles.
    fn brute_force_cycles(g: &Graph, max_len: usize) -> BTreeSet<Vec<usize>> {
        let n = g.vertex_count();
        let mut out = BTreeSet::new();
        fn rec(g: &Graph, seq: &mut Vec<usize>, used: &mut Vec<bool>, max_len: usize, out: &mut BTreeSet<Vec<usize>>) {
            let n = g.vertex_count();
            if seq.len() >= 3 && g.edge_between(*seq.last().unwrap(), seq[0]).is_some() {
                out.insert(canonical(seq));
            }
            if seq.len() == max_len {
                return;
            }
            for w in 0..n {
                if !used[w] && g.edge_between(*seq.last().unwrap(), w).is_some() {
                    used[w] = true;
                    seq.push(w);
                    rec(g, seq, used, max_len, out);
                    seq.pop();
                    used[w] = false;
                }
            }
        }
        for s in 0..n {
            let mut used = vec![false; n];
            used[s] = true;
            rec(g, &mut vec![s], &mut used, max_len, &mut out);
        }
        out
    }

    fn canonical(seq: &[usize]) -> Vec<usize> {
        let k = seq.len();
        let start = (0..k).min_by_key(|&i| seq[i]).unwrap();
        let fwd: Vec<usize> = (0..k).map(|i| seq[(start + i) % k]).collect();
        let bwd: Vec<usize> = (0..k).map(|i| seq[(start + k - i) % k]).collect();
        fwd.min(bwd)
    }

    #[test]
    fn tree_has_no_cycles() {
        assert_eq!(enumerate_short_cycles(&path(9), 10).count(), 0);
        assert_eq!(enumerate_short_cycles(&star(5), 10).count(), 0);
    }

    #[test]
    fn triangle_has_one() {
        let cycles: Vec<_> = enumerate_short_cycles(&cycle(3), 3).collect();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices, vec![0, 1, 2]);
        assert_eq!(enumerate_short_cycles(&cycle(3), 2).count(), 0);
    }

    #[test]
    fn k4_counts_match_brute_force() {
        let k4 = complete(4);
        let cycles: Vec<_> = enumerate_short_cycles(&k4, 4).collect();
        let oracle = brute_force_cycles(&k4, 4);
        assert_eq!(oracle.len(), 7);
        assert_eq!(cycles.len(), 7);
        assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 4);
    }

    #[test]
    fn canonical_form_and_order() {
        let g = petersen();
        let cycles: Vec<_> = enumerate_short_cycles(&g, 9).collect();
        let lens: Vec<_> = cycles.iter().map(CycleVector::len).collect();
        assert!(lens.windows(2).all(|w| w[0] <= w[1]));
        for c in &cycles {
            let v = &c.vertices;
            assert_eq!(*v.iter().min().unwrap(), v[0]);
            assert!(v[1] < v[v.len() - 1]);
            assert!(c.boundary_is_zero(&g));
        }
        let got: BTreeSet<_> = cycles.iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(got.len(), cycles.len());
        assert_eq!(got, brute_force_cycles(&g, 9));
    }

    #[test]
    fn matches_brute_force_on_assorted_graphs() {
        let graphs = [complete(5), torus2(3), torus2_diagonal(3), cycle(7), disjoint_union(&[complete(4), cycle(5)])];
        for g in &graphs {
            for q in 3..=g.vertex_count().min(9) {
                let got: BTreeSet<_> = enumerate_short_cycles(g, q).map(|c| c.vertices).collect();
                assert_eq!(got, brute_force_cycles(g, q), "q = {q}");
            }
        }
    }
}
