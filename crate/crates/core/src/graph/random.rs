//! Seeded random graphs. All generators take a `ChaCha8Rng`-compatible seed
//! and are deterministic for a fixed seed.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph on `n` vertices with degrees at most `max_degree`: a random
/// spanning tree of bounded degree plus up to `extra` random edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, max_degree: usize, extra: usize) -> Graph {
    assert!(n >= 1 && (max_degree >= 2 || n <= 2));
    let mut degree = vec![0usize; n];
    let mut pairs = Vec::new();
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let open: Vec<VertexId> = order[..i].iter().copied().filter(|&u| degree[u] < max_degree).collect();
        let u = open[rng.gen_range(0..open.len())];
        let v = order[i];
        degree[u] += 1;
        degree[v] += 1;
        pairs.push((u, v));
    }
    let mut present: std::collections::HashSet<(VertexId, VertexId)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    for _ in 0..extra * 4 {
        if pairs.len() >= n - 1 + extra {
            break;
        }
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let key = (a.min(b), a.max(b));
        if a == b || degree[a] >= max_degree || degree[b] >= max_degree || present.contains(&key) {
            continue;
        }
        present.insert(key);
        degree[a] += 1;
        degree[b] += 1;
        pairs.push((a, b));
    }
    Graph::new(n, &pairs).expect("generated pairs are simple")
}

/// Uniform labelled tree on `n` vertices via a random Prüfer sequence.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Graph {
    if n <= 2 {
        let pairs: Vec<_> = (1..n).map(|i| (0, i)).collect();
        return Graph::new(n, &pairs).expect("tiny tree");
    }
    let code: Vec<VertexId> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<VertexId>> =
        (0..n).filter(|&v| degree[v] == 1).map(std::cmp::Reverse).collect();
    let mut pairs = Vec::with_capacity(n - 1);
    for &c in &code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf exists");
        pairs.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(std::cmp::Reverse(c));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    pairs.push((a, b));
    Graph::new(n, &pairs).expect("Prüfer decoding gives a tree")
}

/// Whether `u` and `w` are within distance `limit` in `adj`.
fn within(adj: &[Vec<VertexId>], u: VertexId, w: VertexId, limit: usize, seen: &mut [usize], stamp: usize) -> bool {
    if u == w {
        return true;
    }
    let mut queue = VecDeque::from([(u, 0usize)]);
    seen[u] = stamp;
    while let Some((v, d)) = queue.pop_front() {
        if d == limit {
            continue;
        }
        for &x in &adj[v] {
            if x == w {
                return true;
            }
            if seen[x] != stamp {
                seen[x] = stamp;
                queue.push_back((x, d + 1));
            }
        }
    }
    false
}

/// Random 3-regular simple graph on `n` vertices (`n` even) with girth at
/// least `girth_floor`.
///
/// Edges are added between random deficient vertices at distance at least
/// `girth_floor - 1`; when no such pair remains, an existing edge `xy` far
/// from two deficient vertices `u, w` is switched into `ux, wy`. Restarts
/// up to `attempts` times.
pub fn random_cubic_with_girth<R: Rng>(rng: &mut R, n: usize, girth_floor: usize, attempts: usize) -> Result<Graph, GraphError> {
    if n < 4 || n % 2 == 1 {
        return Err(GraphError::InvalidParameter(format!("3-regular graphs need an even n >= 4, got {n}")));
    }
    let limit = girth_floor.saturating_sub(2);
    for _ in 0..attempts.max(1) {
        if let Some(g) = cubic_attempt(rng, n, limit) {
            debug_assert!(g.girth() >= super::Girth::Finite(girth_floor));
            return Ok(g);
        }
    }
    Err(GraphError::InvalidParameter(format!("no 3-regular graph with girth >= {girth_floor} on {n} vertices found")))
}

fn cubic_attempt<R: Rng>(rng: &mut R, n: usize, limit: usize) -> Option<Graph> {
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::with_capacity(3); n];
    let mut seen = vec![0usize; n];
    let mut stamp = 0usize;
    let mut deficient: Vec<VertexId> = (0..n).collect();
    let mut stalls = 0;
    while !deficient.is_empty() {
        let u = deficient[rng.gen_range(0..deficient.len())];
        let mut candidates: Vec<VertexId> = deficient.iter().copied().filter(|&w| w != u && !adj[u].contains(&w)).collect();
        candidates.shuffle(rng);
        let mut partner = None;
        for w in candidates.iter().copied() {
            stamp += 1;
            if !within(&adj, u, w, limit, &mut seen, stamp) {
                partner = Some(w);
                break;
            }
        }
        if let Some(w) = partner {
            adj[u].push(w);
            adj[w].push(u);
        } else {
            // Switch: remove some edge xy, add ux and wy.
            stalls += 1;
            if stalls > 50 * n {
                return None;
            }
            let w = *candidates.first().or_else(|| deficient.iter().find(|&&w| w != u))?;
            let x = rng.gen_range(0..n);
            if adj[x].is_empty() || x == u || x == w {
                continue;
            }
            let y = adj[x][rng.gen_range(0..adj[x].len())];
            if y == u || y == w || adj[u].contains(&x) || adj[w].contains(&y) {
                continue;
            }
            adj[x].retain(|&z| z != y);
            adj[y].retain(|&z| z != x);
            stamp += 1;
            let ok_ux = !within(&adj, u, x, limit, &mut seen, stamp);
            if ok_ux {
                adj[u].push(x);
                adj[x].push(u);
                stamp += 1;
                if !within(&adj, w, y, limit, &mut seen, stamp) {
                    adj[w].push(y);
                    adj[y].push(w);
                } else {
                    adj[u].retain(|&z| z != x);
                    adj[x].retain(|&z| z != u);
                    adj[x].push(y);
                    adj[y].push(x);
                }
            } else {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
        deficient.retain(|&v| adj[v].len() < 3);
    }
    let mut pairs: Vec<(VertexId, VertexId)> =
        (0..n).flat_map(|v| adj[v].iter().filter(move |&&w| v < w).map(move |&w| (v, w))).collect();
    pairs.sort_unstable();
    Graph::new(n, &pairs).ok()
}
