use serde::{Deserialize, Serialize};

use super::InvariantError;
use crate::graph::random::{random_cubic_with_girth, random_tree, rng};
use crate::graph::Graph;
use crate::towers::{cayley_graph, CayleyGraph, TowerSpec};

/// How the graphs of a sequence are produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// Cayley graphs of the quotients of a tower; the index is the level.
    Tower { tower: TowerSpec },
    /// Random 3-regular graphs with a girth floor; the index is `|V|`.
    RandomCubic { girth_floor: usize, seed: u64 },
    /// Uniform random labelled trees; the index is `|V|`.
    RandomTree { seed: u64 },
    /// Graphs given up front, one per window index in order.
    Explicit {
        label: String,
        #[serde(skip)]
        graphs: Vec<Graph>,
    },
}

/// A family evaluated over a window of indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSequence {
    pub name: String,
    pub family: Family,
    pub window: Vec<u64>,
}

/// Names accepted by [`GraphSequence::named`].
pub const FAMILY_NAMES: &[&str] = &["cycle", "z-tower", "torus2", "torus2diag", "freeF2-sl2", "heisenberg", "random-cubic", "random-tree"];

/// Girth floor used by the `random-cubic` family.
pub const DEFAULT_GIRTH_FLOOR: usize = 9;

impl GraphSequence {
    pub fn new(name: impl Into<String>, family: Family, window: Vec<u64>) -> Result<Self, InvariantError> {
        if window.is_empty() {
            return Err(InvariantError::EmptyWindow);
        }
        Ok(GraphSequence { name: name.into(), family, window })
    }

    pub fn tower(tower: TowerSpec, window: Vec<u64>) -> Result<Self, InvariantError> {
        GraphSequence::new(tower.family_name.clone(), Family::Tower { tower }, window)
    }

    /// Indexed by position `0, 1, ...`.
    pub fn explicit(label: impl Into<String>, graphs: Vec<Graph>) -> Result<Self, InvariantError> {
        let window = (0..graphs.len() as u64).collect();
        GraphSequence::explicit_indexed(label, window, graphs)
    }

    /// One graph per window index, e.g. files written for a known window.
    pub fn explicit_indexed(label: impl Into<String>, window: Vec<u64>, graphs: Vec<Graph>) -> Result<Self, InvariantError> {
        if window.len() != graphs.len() {
            return Err(InvariantError::BadWindow(format!("{} indices for {} graphs", window.len(), graphs.len())));
        }
        let label = label.into();
        GraphSequence::new(label.clone(), Family::Explicit { label, graphs }, window)
    }

    /// Built-in families by name.
    pub fn named(name: &str, window: Vec<u64>, seed: u64) -> Result<Self, InvariantError> {
        let family = match name {
            "cycle" | "z-tower" => Family::Tower { tower: TowerSpec::cyclic() },
            "torus2" => Family::Tower { tower: TowerSpec::torus2() },
            "torus2diag" => Family::Tower { tower: TowerSpec::torus2_diagonal() },
            "freeF2-sl2" => Family::Tower { tower: TowerSpec::free2_sl2() },
            "heisenberg" => Family::Tower { tower: TowerSpec::heisenberg() },
            "random-cubic" => Family::RandomCubic { girth_floor: DEFAULT_GIRTH_FLOOR, seed },
            "random-tree" => Family::RandomTree { seed },
            other => return Err(InvariantError::UnknownFamily(other.to_string())),
        };
        GraphSequence::new(name, family, window)
    }

    pub fn tower_spec(&self) -> Option<&TowerSpec> {
        match &self.family {
            Family::Tower { tower } => Some(tower),
            _ => None,
        }
    }

    /// Declared bound on vertex degrees, where one is known in advance.
    pub fn degree_bound(&self) -> Option<usize> {
        match &self.family {
            Family::Tower { tower } => Some(2 * tower.generators.len()),
            Family::RandomCubic { .. } => Some(3),
            Family::RandomTree { .. } => None,
            Family::Explicit { graphs, .. } => graphs.iter().map(Graph::max_degree).max(),
        }
    }

    /// The Cayley graph at level `n` for tower-backed sequences.
    pub fn cayley(&self, n: u64) -> Result<CayleyGraph, InvariantError> {
        let tower = self.tower_spec().ok_or_else(|| InvariantError::Inapplicable(format!("{} is not tower-backed", self.name)))?;
        Ok(cayley_graph(tower, n)?)
    }

    pub fn graph(&self, n: u64) -> Result<Graph, InvariantError> {
        let g = match &self.family {
            Family::Tower { .. } => self.cayley(n)?.graph,
            Family::RandomCubic { girth_floor, seed } => {
                let mut r = rng(seed ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                random_cubic_with_girth(&mut r, n as usize, *girth_floor, 50)?
            }
            Family::RandomTree { seed } => {
                let mut r = rng(seed ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                random_tree(&mut r, n as usize)
            }
            Family::Explicit { graphs, .. } => self
                .window
                .iter()
                .position(|&w| w == n)
                .and_then(|i| graphs.get(i))
                .cloned()
                .ok_or_else(|| InvariantError::Inapplicable(format!("no graph at index {n}")))?,
        };
        if let Some(bound) = self.degree_bound() {
            if g.max_degree() > bound {
                return Err(InvariantError::Inapplicable(format!("graph at {n} has degree {} above {bound}", g.max_degree())));
            }
        }
        Ok(g)
    }

    /// All graphs of the window, checking that `|V|` strictly increases
    /// (explicit lists are exempt: they may be single degenerate examples).
    pub fn graphs(&self) -> Result<Vec<(u64, Graph)>, InvariantError> {
        let out: Vec<(u64, Graph)> = self.window.iter().map(|&n| Ok((n, self.graph(n)?))).collect::<Result<_, InvariantError>>()?;
        if !matches!(self.family, Family::Explicit { .. }) {
            for pair in out.windows(2) {
                if pair[1].1.vertex_count() <= pair[0].1.vertex_count() {
                    return Err(InvariantError::NotIncreasing { n: pair[1].0 });
                }
            }
        }
        Ok(out)
    }
}

/// Parses `lo:hi` (inclusive, optional `:step`) or a comma-separated list.
pub fn parse_window(text: &str) -> Result<Vec<u64>, InvariantError> {
    let bad = || InvariantError::BadWindow(text.to_string());
    let window: Vec<u64> = if text.contains(':') {
        let parts: Vec<u64> = text.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        match parts[..] {
            [lo, hi] if lo <= hi => (lo..=hi).collect(),
            [lo, hi, step] if lo <= hi && step > 0 => (lo..=hi).step_by(step as usize).collect(),
            _ => return Err(bad()),
        }
    } else {
        text.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if window.is_empty() || window.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad());
    }
    Ok(window)
}
