use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{EdgeId, Girth, Graph, GraphError, VertexId};

pub(crate) const UNREACHED: usize = usize::MAX;

/// A Lipschitz constant between two path metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lipschitz {
    Finite(usize),
    Unbounded,
}

impl Lipschitz {
    pub fn is_finite(&self) -> bool {
        matches!(self, Lipschitz::Finite(_))
    }

    pub fn value(&self) -> Option<usize> {
        match *self {
            Lipschitz::Finite(l) => Some(l),
            Lipschitz::Unbounded => None,
        }
    }
}

impl Graph {
    /// Shortest-path distances from `source` up to `cap`; farther vertices are omitted.
    pub fn bfs_distance(&self, source: VertexId, cap: usize) -> BTreeMap<VertexId, usize> {
        let dist = self.distances_capped(source, cap);
        dist.into_iter().enumerate().filter(|&(_, d)| d != UNREACHED).collect()
    }

    /// Full distance vector from `source`; unreachable vertices hold `usize::MAX`.
    pub fn distances_from(&self, source: VertexId) -> Vec<usize> {
        self.distances_capped(source, usize::MAX)
    }

    pub(crate) fn distances_capped(&self, source: VertexId, cap: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            if dist[v] >= cap {
                continue;
            }
            for w in self.neighbors(v) {
                if dist[w] == UNREACHED {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Multi-source distances to the nearest vertex of `sources`.
    pub fn distances_to_set(&self, sources: &[VertexId]) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == UNREACHED {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if dist[w] == UNREACHED {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle.
    ///
    /// One BFS per root; a non-tree edge `(u, w)` met during the search
    /// closes a closed walk of length `d(u) + d(w) + 1` through the root, and
    /// the minimum over all roots is attained by a shortest cycle.
    pub fn girth(&self) -> Girth {
        let n = self.vertex_count();
        let mut best = usize::MAX;
        let mut dist = vec![UNREACHED; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'search: while let Some(v) = queue.pop_front() {
                if 2 * dist[v] + 1 >= best {
                    break;
                }
                for inc in self.incidences(v) {
                    let w = inc.neighbor;
                    if dist[w] == UNREACHED {
                        dist[w] = dist[v] + 1;
                        parent_edge[w] = inc.edge;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent_edge[v] != inc.edge {
                        best = best.min(dist[v] + dist[w] + 1);
                        if best == 3 {
                            break 'search;
                        }
                    }
                }
            }
            for &v in &touched {
                dist[v] = UNREACHED;
                parent_edge[v] = usize::MAX;
            }
            touched.clear();
            queue.clear();
            if best == 3 {
                break;
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// BFS spanning forest: one tree per component, rooted at the component's
    /// lowest vertex id, neighbours scanned in adjacency order.
    pub fn spanning_forest(&self) -> Vec<EdgeId> {
        let mut seen = vec![false; self.vertex_count()];
        let mut forest = Vec::with_capacity(self.vertex_count());
        let mut queue = VecDeque::new();
        for root in 0..self.vertex_count() {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for inc in self.incidences(v) {
                    if !seen[inc.neighbor] {
                        seen[inc.neighbor] = true;
                        forest.push(inc.edge);
                        queue.push_back(inc.neighbor);
                    }
                }
            }
        }
        forest
    }
}

/// Least `L` such that every edge `(x, y)` of `h` has `d_g(x, y) <= L`.
///
/// By the triangle inequality this is the least `L` with
/// `d_g <= L * d_h` on all pairs. Edgeless `h` yields `Finite(1)`.
pub fn domination_constant(g: &Graph, h: &Graph) -> Result<Lipschitz, GraphError> {
    if g.vertex_count() != h.vertex_count() {
        return Err(GraphError::VertexCountMismatch { left: g.vertex_count(), right: h.vertex_count() });
    }
    // Group h-edges by low endpoint so each BFS in g serves all of them.
    let mut by_source: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(u, w) in h.edges() {
        by_source.entry(u).or_default().push(w);
    }
    let mut worst = 1;
    for (source, targets) in by_source {
        if targets.iter().all(|&t| g.edge_between(source, t).is_some()) {
            continue;
        }
        let dist = g.distances_from(source);
        for t in targets {
            if dist[t] == UNREACHED {
                return Ok(Lipschitz::Unbounded);
            }
            worst = worst.max(dist[t]);
        }
    }
    Ok(Lipschitz::Finite(worst))
}

/// Greedy maximal `q`-net: scan vertices in ascending id and keep every
/// vertex at distance at least `q` from all previously kept ones.
pub fn max_q_net(g: &Graph, q: usize) -> Result<Vec<VertexId>, GraphError> {
    if q == 0 {
        return Err(GraphError::InvalidParameter("q must be at least 1".into()));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let mut blocked = vec![false; g.vertex_count()];
    let mut net = Vec::new();
    for v in 0..g.vertex_count() {
        if blocked[v] {
            continue;
        }
        net.push(v);
        // Everything within distance q - 1 of v is now too close.
        for (w, _) in g.bfs_distance(v, q - 1) {
            blocked[w] = true;
        }
    }
    Ok(net)
}
