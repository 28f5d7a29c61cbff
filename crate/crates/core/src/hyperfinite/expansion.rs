//! Exhaustive minimum of `|∂F| / |F|` over small connected vertex sets.
//!
//! Disconnected sets never win: with no edges between its components, the
//! ratio of `F` is a weighted mean of the components' ratios. Connected sets
//! are enumerated once each by ESU-style extension: a set is grown from its
//! smallest vertex, only through vertices larger than it, and a vertex joins
//! the extension frontier only the first time it becomes adjacent.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::HyperError;
use crate::exact::Exact;
use crate::graph::{Graph, VertexId};

pub const DEFAULT_EXPANSION_CAP: usize = 10;

/// Which smallest vertices the search starts from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMode {
    /// Every vertex: exact for any graph.
    #[default]
    All,
    /// Vertex 0 only: exact when the automorphism group is vertex
    /// transitive (Cayley graphs), since every set is then equivalent to one
    /// containing vertex 0, and vertex 0 is the smallest vertex of any set
    /// containing it.
    VertexTransitive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionOptions {
    pub cap: usize,
    pub roots: RootMode,
    pub jobs: usize,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions { cap: DEFAULT_EXPANSION_CAP, roots: RootMode::All, jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub m: usize,
    pub delta: Exact,
    pub boundary: u64,
    /// Lexicographically smallest set realising `delta`.
    pub argmin: Vec<VertexId>,
    /// Number of connected sets examined.
    pub sets_searched: u64,
    pub roots: RootMode,
}

#[derive(Clone, Debug)]
struct Best<S> {
    boundary: u64,
    size: u64,
    set: S,
}

/// Ratio first, then lexicographic order of the sorted vertex lists.
fn compare<S>(a: &Best<S>, b: &Best<S>, lex: impl Fn(&S, &S) -> Ordering) -> Ordering {
    (a.boundary as u128 * b.size as u128).cmp(&(b.boundary as u128 * a.size as u128)).then_with(|| lex(&a.set, &b.set))
}

fn mask_lex(a: &u64, b: &u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let d = diff.trailing_zeros();
    let above = if d == 63 { 0 } else { !0u64 << (d + 1) };
    // Below d the lists agree; the one holding d is smaller unless the other
    // one stops right there.
    let (other, sign) = if a >> d & 1 == 1 { (b, Ordering::Less) } else { (a, Ordering::Greater) };
    if other & above != 0 {
        sign
    } else {
        sign.reverse()
    }
}

fn better<S>(current: &mut Option<Best<S>>, candidate: Best<S>, lex: impl Fn(&S, &S) -> Ordering) {
    match current {
        Some(best) if compare(&candidate, best, lex) != Ordering::Less => {}
        _ => *current = Some(candidate),
    }
}

pub fn min_small_set_expansion(g: &Graph, m: usize) -> Result<ExpansionReport, HyperError> {
    min_small_set_expansion_with(g, m, ExpansionOptions::default())
}

pub fn min_small_set_expansion_with(g: &Graph, m: usize, options: ExpansionOptions) -> Result<ExpansionReport, HyperError> {
    if m > options.cap {
        return Err(HyperError::CapExceeded { m, cap: options.cap });
    }
    if m == 0 || g.vertex_count() == 0 {
        return Err(HyperError::Graph(crate::graph::GraphError::InvalidParameter("expansion needs m >= 1 and a nonempty graph".into())));
    }
    let roots: Vec<VertexId> = match options.roots {
        RootMode::All => (0..g.vertex_count()).collect(),
        RootMode::VertexTransitive => vec![0],
    };
    let (best, count) = if g.vertex_count() <= 64 { masks::search(g, m, &roots, options.jobs) } else { lists::search(g, m, &roots, options.jobs) };
    Ok(ExpansionReport {
        m,
        delta: Exact::ratio(best.boundary as usize, best.size as usize),
        boundary: best.boundary,
        argmin: best.set,
        sets_searched: count,
        roots: options.roots,
    })
}

mod masks {
    use super::*;

    struct Search<'a> {
        nbr: &'a [u64],
        deg: &'a [u64],
        m: usize,
        count: u64,
        best: Option<Best<u64>>,
    }

    impl Search<'_> {
        fn grow(&mut self, sub: u64, ext: u64, excl: u64, size: usize, boundary: u64) {
            self.count += 1;
            let improves = match &self.best {
                None => true,
                Some(b) => {
                    let lhs = boundary as u128 * b.size as u128;
                    let rhs = b.boundary as u128 * size as u128;
                    lhs < rhs || (lhs == rhs && mask_lex(&sub, &b.set) == Ordering::Less)
                }
            };
            if improves {
                self.best = Some(Best { boundary, size: size as u64, set: sub });
            }
            if size == self.m {
                return;
            }
            let mut rest = ext;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let nw = self.nbr[w];
                let b = boundary + self.deg[w] - 2 * (nw & sub).count_ones() as u64;
                self.grow(sub | 1 << w, rest | (nw & !excl), excl | nw, size + 1, b);
            }
        }
    }

    pub(super) fn search(g: &Graph, m: usize, roots: &[VertexId], jobs: usize) -> (Best<Vec<VertexId>>, u64) {
        let n = g.vertex_count();
        let nbr: Vec<u64> = (0..n).map(|v| g.neighbors(v).fold(0u64, |acc, w| acc | 1 << w)).collect();
        let deg: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();

        // Tasks: the first extension step below each root.
        let mut tasks = Vec::new();
        let mut head = Search { nbr: &nbr, deg: &deg, m: 1, count: 0, best: None };
        for &r in roots {
            let below = if r == 0 { 0 } else { (1u64 << r) - 1 };
            let sub = 1u64 << r;
            let excl = below | sub | nbr[r];
            head.grow(sub, 0, excl, 1, deg[r]);
            if m == 1 {
                continue;
            }
            let mut rest = nbr[r] & !below;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let b = deg[r] + deg[w] - 2;
                tasks.push((sub | 1 << w, rest | (nbr[w] & !excl), excl | nbr[w], b));
            }
        }
        let results: Vec<(Option<Best<u64>>, u64)> = crate::parallel::with_jobs(jobs, || {
            tasks
                .par_iter()
                .map(|&(sub, ext, excl, b)| {
                    let mut s = Search { nbr: &nbr, deg: &deg, m, count: 0, best: None };
                    s.grow(sub, ext, excl, 2, b);
                    (s.best, s.count)
                })
                .collect()
        });
        let mut best = head.best;
        let mut count = head.count;
        for (candidate, c) in results {
            count += c;
            if let Some(candidate) = candidate {
                better(&mut best, candidate, mask_lex);
            }
        }
        let best = best.expect("at least one root");
        let set = (0..n).filter(|&v| best.set >> v & 1 == 1).collect();
        (Best { boundary: best.boundary, size: best.size, set }, count)
    }
}

mod lists {
    use super::*;

    struct Search<'a> {
        g: &'a Graph,
        m: usize,
        count: u64,
        best: Option<Best<Vec<VertexId>>>,
        sub: Vec<VertexId>,
        in_sub: Vec<bool>,
        excl: Vec<u32>,
    }

    impl Search<'_> {
        fn new(g: &Graph, m: usize) -> Search<'_> {
            Search {
                g,
                m,
                count: 0,
                best: None,
                sub: Vec::with_capacity(m),
                in_sub: vec![false; g.vertex_count()],
                excl: vec![0; g.vertex_count()],
            }
        }

        fn record(&mut self, boundary: u64) {
            self.count += 1;
            let size = self.sub.len() as u64;
            let improves = match &self.best {
                None => true,
                Some(b) => {
                    let lhs = boundary as u128 * b.size as u128;
                    let rhs = b.boundary as u128 * size as u128;
                    lhs < rhs || (lhs == rhs && {
                        let mut sorted = self.sub.clone();
                        sorted.sort_unstable();
                        sorted < b.set
                    })
                }
            };
            if improves {
                let mut set = self.sub.clone();
                set.sort_unstable();
                self.best = Some(Best { boundary, size, set });
            }
        }

        fn mark(&mut self, v: VertexId, delta: i32) {
            self.excl[v] = (self.excl[v] as i32 + delta) as u32;
            for w in self.g.neighbors(v) {
                self.excl[w] = (self.excl[w] as i32 + delta) as u32;
            }
        }

        fn add(&mut self, w: VertexId, boundary: u64) -> u64 {
            let inside = self.g.neighbors(w).filter(|&x| self.in_sub[x]).count() as u64;
            self.sub.push(w);
            self.in_sub[w] = true;
            boundary + self.g.degree(w) as u64 - 2 * inside
        }

        fn remove(&mut self, w: VertexId) {
            self.sub.pop();
            self.in_sub[w] = false;
        }

        fn grow(&mut self, ext: &[VertexId], boundary: u64) {
            self.record(boundary);
            if self.sub.len() == self.m {
                return;
            }
            for i in 0..ext.len() {
                let w = ext[i];
                let mut next: Vec<VertexId> = ext[i + 1..].to_vec();
                next.extend(self.g.neighbors(w).filter(|&u| self.excl[u] == 0));
                let b = self.add(w, boundary);
                self.mark(w, 1);
                self.grow(&next, b);
                self.mark(w, -1);
                self.remove(w);
            }
        }

        /// Starts at root `r`: vertices below `r` are excluded for good.
        fn start(&mut self, r: VertexId, first: Option<usize>) {
            for v in 0..r {
                self.excl[v] += 1;
            }
            let b = self.add(r, 0);
            self.mark(r, 1);
            let ext: Vec<VertexId> = self.g.neighbors(r).filter(|&u| u > r).collect();
            match first {
                None => self.record(b),
                Some(i) if i < ext.len() && self.m > 1 => {
                    let w = ext[i];
                    let mut next: Vec<VertexId> = ext[i + 1..].to_vec();
                    next.extend(self.g.neighbors(w).filter(|&u| self.excl[u] == 0));
                    let b2 = self.add(w, b);
                    self.mark(w, 1);
                    self.grow(&next, b2);
                    self.mark(w, -1);
                    self.remove(w);
                }
                Some(_) => {}
            }
            self.mark(r, -1);
            self.remove(r);
            for v in 0..r {
                self.excl[v] -= 1;
            }
        }
    }

    pub(super) fn search(g: &Graph, m: usize, roots: &[VertexId], jobs: usize) -> (Best<Vec<VertexId>>, u64) {
        let mut tasks: Vec<(VertexId, Option<usize>)> = Vec::new();
        for &r in roots {
            tasks.push((r, None));
            let width = g.neighbors(r).filter(|&u| u > r).count();
            tasks.extend((0..width).map(|i| (r, Some(i))));
        }
        let results: Vec<(Option<Best<Vec<VertexId>>>, u64)> = crate::parallel::with_jobs(jobs, || {
            tasks
                .par_iter()
                .map_init(
                    || Search::new(g, m),
                    |s, &(r, first)| {
                        s.best = None;
                        s.count = 0;
                        s.start(r, first);
                        (s.best.take(), s.count)
                    },
                )
                .collect()
        });
        let mut best = None;
        let mut count = 0;
        for (candidate, c) in results {
            count += c;
            if let Some(candidate) = candidate {
                better(&mut best, candidate, |a: &Vec<VertexId>, b: &Vec<VertexId>| a.cmp(b));
            }
        }
        (best.expect("at least one root"), count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::random::{random_connected, rng};

    /// Oracle: every nonempty subset of size <= m, connected or not.
    fn power_set(g: &Graph, m: usize) -> (Exact, Vec<VertexId>) {
        let n = g.vertex_count();
        let mut best: Option<(Exact, Vec<VertexId>)> = None;
        for mask in 1u64..(1 << n) {
            if mask.count_ones() as usize > m {
                continue;
            }
            let set: Vec<VertexId> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let boundary = g.edges().iter().filter(|&&(u, w)| (mask >> u & 1) != (mask >> w & 1)).count();
            let r = Exact::ratio(boundary, set.len());
            if best.as_ref().map_or(true, |(b, s)| r < *b || (r == *b && set < *s)) {
                best = Some((r, set));
            }
        }
        best.unwrap()
    }

    /// Same search with the list-based engine regardless of size.
    fn via_lists(g: &Graph, m: usize) -> ExpansionReport {
        let roots: Vec<_> = (0..g.vertex_count()).collect();
        let (best, count) = lists::search(g, m, &roots, 1);
        ExpansionReport {
            m,
            delta: Exact::ratio(best.boundary as usize, best.size as usize),
            boundary: best.boundary,
            argmin: best.set,
            sets_searched: count,
            roots: RootMode::All,
        }
    }

    #[test]
    fn cycle_arcs() {
        let r = min_small_set_expansion(&cycle(8), 3).unwrap();
        assert_eq!(r.delta, Exact::new(2, 3));
        assert_eq!(r.argmin, vec![0, 1, 2]);
        assert_eq!(power_set(&cycle(8), 3).0, r.delta);
        // Connected sets of size <= 3 on C_8: 8 of each size.
        assert_eq!(r.sets_searched, 24);
    }

    #[test]
    fn torus_square() {
        let r = min_small_set_expansion(&torus2(8), 4).unwrap();
        assert_eq!(r.delta, Exact::from_int(2));
        assert_eq!(r.argmin, vec![0, 1, 8, 9]);
        // Fixed polyominoes of sizes 1..4 are 1, 2, 6, 19; each has k placements containing 0.
        let vt = min_small_set_expansion_with(&torus2(8), 4, ExpansionOptions { roots: RootMode::VertexTransitive, ..Default::default() }).unwrap();
        assert_eq!(vt.sets_searched, 1 + 2 * 2 + 3 * 6 + 4 * 19);
        assert_eq!((vt.delta, vt.argmin), (r.delta, r.argmin));
    }

    #[test]
    fn connected_search_matches_power_set() {
        let mut r = rng(4);
        for n in 2..=10 {
            let g = random_connected(&mut r, n, 4, n / 2);
            for m in 1..=n {
                let fast = min_small_set_expansion(&g, m).unwrap();
                let (delta, set) = power_set(&g, m);
                assert_eq!(fast.delta, delta, "n={n} m={m}");
                assert_eq!(fast.argmin, set, "n={n} m={m}");
                assert_eq!(via_lists(&g, m), fast);
            }
        }
        let g = disjoint_union(&[cycle(4), complete(4)]);
        assert_eq!(min_small_set_expansion(&g, 8).unwrap().delta, power_set(&g, 8).0);
    }

    #[test]
    fn engines_agree_and_jobs_do_not_matter() {
        let g = torus2_diagonal(6);
        let a = min_small_set_expansion_with(&g, 5, ExpansionOptions { jobs: 1, ..Default::default() }).unwrap();
        let b = min_small_set_expansion_with(&g, 5, ExpansionOptions { jobs: 4, ..Default::default() }).unwrap();
        assert_eq!(a, b);
        assert_eq!(via_lists(&g, 5), a);
    }

    #[test]
    fn large_graph_uses_lists() {
        let g = cycle(100);
        let r = min_small_set_expansion(&g, 4).unwrap();
        assert_eq!(r.delta, Exact::new(1, 2));
        assert_eq!(r.argmin, vec![0, 1, 2, 3]);
        assert_eq!(r.sets_searched, 400);
    }

    #[test]
    fn cap() {
        assert!(matches!(min_small_set_expansion(&cycle(20), 11), Err(HyperError::CapExceeded { .. })));
        let opts = ExpansionOptions { cap: 12, ..Default::default() };
        assert!(min_small_set_expansion_with(&cycle(20), 11, opts).is_ok());
    }

    #[test]
    fn mask_order_is_list_order() {
        let sets: [u64; 6] = [0b1, 0b11, 0b101, 0b10, 0b110, 0b1000_0001];
        for a in sets {
            for b in sets {
                let la: Vec<u32> = (0..64).filter(|&i| a >> i & 1 == 1).collect();
                let lb: Vec<u32> = (0..64).filter(|&i| b >> i & 1 == 1).collect();
                assert_eq!(mask_lex(&a, &b), la.cmp(&lb), "{a:b} {b:b}");
            }
        }
    }
}
