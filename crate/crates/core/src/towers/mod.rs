//! Cayley graphs of finite quotients `Γ/Γ_n`, mod-p homology of `Γ_n`
//! through relator lifts, and coset compressions.

mod compression;
mod group;
mod homology;

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use compression::{coset_compression, CompressionReport};
pub use group::{parse_word, Element, QuotientFamily, Word};
pub use homology::{schreier_homology_dim, HomologyReport};

use crate::exact::Exact;
use crate::graph::{Graph, GraphError, VertexId};

pub const DEFAULT_ELEMENT_CAP: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("level {n}: {reason}")]
    BadParameter { n: u64, reason: String },
    #[error("bad generator image: {0}")]
    BadImage(String),
    #[error("generator image {image:?} is not invertible at level {n}")]
    NotInvertible { n: u64, image: Vec<i64> },
    #[error("quotient at level {n} exceeds the element cap {cap}")]
    ElementCapExceeded { n: u64, cap: usize },
    #[error("bad word: {0}")]
    BadWord(String),
    #[error("relator {relator:?} is not trivial at level {n}")]
    RelatorNotTrivial { n: u64, relator: String },
    #[error("tower {0:?} has no relator list")]
    MissingRelators(String),
    #[error("levels {k} -> {n} are not nested for this family")]
    NotNested { k: u64, n: u64 },
    #[error("word {word:?} does not lie in the level-{k} kernel")]
    NotInSubgroup { word: String, k: u64 },
    #[error("subgroup words do not generate the level-{k} kernel in level {n} ({reached} of {size} cosets reached)")]
    NotGenerating { k: u64, n: u64, reached: usize, size: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("descriptor: {0}")]
    Descriptor(String),
}

/// What is known about `Γ` itself, used only for closed-form rank formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupKind {
    /// Free on the listed generators.
    Free,
    /// Free abelian of the given rank.
    FreeAbelian { rank: usize },
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub label: String,
    /// Integer image in the family's encoding, reduced at each level.
    pub image: Vec<i64>,
}

/// A residually finite group with a family of finite quotients.
///
/// This is also the tower descriptor file format (JSON).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub family_name: String,
    pub quotients: QuotientFamily,
    pub group: GroupKind,
    pub generators: Vec<GeneratorSpec>,
    /// Relator words over the generator labels; `None` when no presentation
    /// is known. An empty list means the group is free on the generators.
    #[serde(default)]
    pub relators: Option<Vec<String>>,
    /// Quotient levels to evaluate.
    #[serde(default)]
    pub levels: Vec<u64>,
    #[serde(default = "default_cap")]
    pub element_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_ELEMENT_CAP
}

fn generators(pairs: &[(&str, &[i64])]) -> Vec<GeneratorSpec> {
    pairs.iter().map(|(l, img)| GeneratorSpec { label: l.to_string(), image: img.to_vec() }).collect()
}

impl TowerSpec {
    /// `Z` with generator `a = 1`, quotients `Z/n`.
    pub fn cyclic() -> Self {
        TowerSpec {
            family_name: "cyclic".into(),
            quotients: QuotientFamily::Residues { dim: 1 },
            group: GroupKind::Free,
            generators: generators(&[("a", &[1])]),
            relators: Some(Vec::new()),
            levels: Vec::new(),
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }

    /// `Z^2 = <a, b | a b a^-1 b^-1>`, quotients `(Z/n)^2`.
    pub fn torus2() -> Self {
        TowerSpec {
            family_name: "torus2".into(),
            quotients: QuotientFamily::Residues { dim: 2 },
            group: GroupKind::FreeAbelian { rank: 2 },
            generators: generators(&[("a", &[1, 0]), ("b", &[0, 1])]),
            relators: Some(vec!["a b a^-1 b^-1".into()]),
            levels: Vec::new(),
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }

    /// `Z^2` on `a, b, c = ab`; its Cayley graphs are tori with diagonals.
    pub fn torus2_diagonal() -> Self {
        TowerSpec {
            family_name: "torus2diag".into(),
            generators: generators(&[("a", &[1, 0]), ("b", &[0, 1]), ("c", &[1, 1])]),
            relators: Some(vec!["a b a^-1 b^-1".into(), "a b c^-1".into()]),
            ..TowerSpec::torus2()
        }
    }

    /// Free group on `a, b` mapped onto `SL(2, p)` by the two elementary matrices.
    pub fn free2_sl2() -> Self {
        TowerSpec {
            family_name: "freeF2-sl2".into(),
            quotients: QuotientFamily::Sl2,
            group: GroupKind::Free,
            generators: generators(&[("a", &[1, 1, 0, 1]), ("b", &[1, 0, 1, 1])]),
            relators: Some(Vec::new()),
            levels: Vec::new(),
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }

    /// Discrete Heisenberg group `<a, b | [[a,b],a], [[a,b],b]>`, quotients mod `n`.
    pub fn heisenberg() -> Self {
        let c = "a b a^-1 b^-1";
        let c_inv = "b a b^-1 a^-1";
        TowerSpec {
            family_name: "heisenberg".into(),
            quotients: QuotientFamily::Heisenberg,
            group: GroupKind::Other,
            generators: generators(&[("a", &[1, 0, 0]), ("b", &[0, 1, 0])]),
            relators: Some(vec![format!("{c} a {c_inv} a^-1"), format!("{c} b {c_inv} b^-1")]),
            levels: Vec::new(),
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }

    pub fn with_levels(mut self, levels: impl IntoIterator<Item = u64>) -> Self {
        self.levels = levels.into_iter().collect();
        self
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, TowerError> {
        parse_word(text, &self.labels())
    }

    pub fn from_json(text: &str) -> Result<Self, TowerError> {
        let spec: TowerSpec = serde_json::from_str(text).map_err(|e| TowerError::Descriptor(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, TowerError> {
        let text = fs::read_to_string(path.as_ref()).map_err(|e| TowerError::Descriptor(format!("{}: {e}", path.as_ref().display())))?;
        TowerSpec::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tower spec serializes")
    }

    /// Static checks: labels unique, relators parse, levels admissible.
    pub fn validate(&self) -> Result<(), TowerError> {
        let labels = self.labels();
        if labels.is_empty() {
            return Err(TowerError::Descriptor("no generators".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) || l.contains('^') || labels[..i].contains(l) {
                return Err(TowerError::Descriptor(format!("bad or repeated generator label {l:?}")));
            }
        }
        for r in self.relators.iter().flatten() {
            self.parse_word(r)?;
        }
        for &n in &self.levels {
            self.quotients.check_parameter(n)?;
        }
        Ok(())
    }

    /// Generator images at level `n`.
    fn images(&self, n: u64) -> Result<Vec<Element>, TowerError> {
        self.quotients.check_parameter(n)?;
        self.generators.iter().map(|g| self.quotients.reduce(&g.image, n)).collect()
    }

    /// Evaluates a word at level `n`.
    pub fn evaluate(&self, word: &Word, n: u64) -> Result<Element, TowerError> {
        let images = self.images(n)?;
        Ok(evaluate_with(&self.quotients, &images, word, n))
    }
}

fn evaluate_with(family: &QuotientFamily, images: &[Element], word: &Word, n: u64) -> Element {
    let mut x = family.identity();
    for &(g, sign) in word {
        let step = if sign > 0 { images[g].clone() } else { family.inverse(&images[g], n) };
        x = family.multiply(&x, &step, n);
    }
    x
}

/// Cayley graph of one quotient, with vertices labelled by group elements.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub level: u64,
    pub graph: Graph,
    /// Vertex id -> element; ids follow the sorted canonical element order,
    /// so graphs of one quotient under different generating sets share labels.
    pub elements: Vec<Element>,
    /// `right[v][s]` is the vertex of `elements[v] * s`.
    pub right: Vec<Vec<VertexId>>,
    /// `right_inv[v][s]` is the vertex of `elements[v] * s^-1`.
    pub right_inv: Vec<Vec<VertexId>>,
    /// Some generator acts trivially or two labelled edges collapse to one
    /// simple edge, so the simple graph differs from the Schreier graph.
    pub degenerate: bool,
}

impl CayleyGraph {
    pub fn index(&self) -> usize {
        self.elements.len()
    }

    pub fn vertex_of(&self, element: &Element) -> Option<VertexId> {
        self.elements.binary_search(element).ok()
    }

    /// End vertex of the walk reading `word` from `start`.
    pub fn walk(&self, start: VertexId, word: &Word) -> VertexId {
        word.iter().fold(start, |v, &(g, sign)| if sign > 0 { self.right[v][g] } else { self.right_inv[v][g] })
    }
}

/// Enumerates `Γ/Γ_n` by BFS from the identity over `S ∪ S⁻¹` and builds its
/// Cayley graph with one simple edge per pair `{g, g s}`. Loops are dropped.
pub fn cayley_graph(tower: &TowerSpec, n: u64) -> Result<CayleyGraph, TowerError> {
    let family = &tower.quotients;
    let images = tower.images(n)?;
    let inverses: Vec<Element> = images.iter().map(|x| family.inverse(x, n)).collect();

    let identity = family.identity();
    let mut index: HashMap<Element, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut found = vec![identity];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for step in images.iter().chain(&inverses) {
            let next = family.multiply(&found[i], step, n);
            if !index.contains_key(&next) {
                if found.len() >= tower.element_cap {
                    return Err(TowerError::ElementCapExceeded { n, cap: tower.element_cap });
                }
                index.insert(next.clone(), found.len());
                queue.push_back(found.len());
                found.push(next);
            }
        }
    }

    let mut elements = found;
    elements.sort_unstable();
    let vertex = |e: &Element| elements.binary_search(e).expect("closed under generators");
    let right: Vec<Vec<VertexId>> =
        elements.iter().map(|x| images.iter().map(|s| vertex(&family.multiply(x, s, n))).collect()).collect();
    let right_inv: Vec<Vec<VertexId>> =
        elements.iter().map(|x| inverses.iter().map(|s| vertex(&family.multiply(x, s, n))).collect()).collect();

    let labelled = elements.len() * images.len();
    let pairs = right.iter().enumerate().flat_map(|(v, row)| row.iter().map(move |&w| (v, w)));
    let graph = Graph::from_pairs_dedup(elements.len(), pairs)?;
    let degenerate = graph.edge_count() != labelled;

    for r in tower.relators.iter().flatten() {
        let word = tower.parse_word(r)?;
        if evaluate_with(family, &images, &word, n) != family.identity() {
            return Err(TowerError::RelatorNotTrivial { n, relator: r.clone() });
        }
    }

    Ok(CayleyGraph { level: n, graph, elements, right, right_inv, degenerate })
}

/// `d(Γ_n) / |Γ:Γ_n|` where a closed form is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankGradientTerm {
    Known { generators: u64, index: u64, term: Exact },
    Unavailable,
}

/// Free groups use Nielsen–Schreier (`d = 1 + index (|S| - 1)`), free
/// abelian groups keep their rank; anything else is unavailable.
pub fn known_rank_gradient_term(tower: &TowerSpec, n: u64) -> Result<RankGradientTerm, TowerError> {
    let generators = match tower.group {
        GroupKind::Other => return Ok(RankGradientTerm::Unavailable),
        _ => tower.generators.len() as u64,
    };
    let index = cayley_graph(tower, n)?.index() as u64;
    let d = match tower.group {
        GroupKind::Free => 1 + index * (generators - 1),
        GroupKind::FreeAbelian { rank } => rank as u64,
        GroupKind::Other => unreachable!(),
    };
    Ok(RankGradientTerm::Known { generators: d, index, term: Exact::ratio(d as usize, index as usize) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn cyclic_quotient_is_cycle() {
        let c = cayley_graph(&TowerSpec::cyclic(), 5).unwrap();
        assert_eq!(c.graph.edge_set(), families::cycle(5).edge_set());
        assert!(!c.degenerate);
        assert_eq!(c.elements[3], vec![3]);
    }

    #[test]
    fn torus_quotient_matches_direct_construction() {
        for n in 3..8 {
            let c = cayley_graph(&TowerSpec::torus2(), n).unwrap();
            assert_eq!(c.graph.edge_count(), 2 * (n * n) as usize);
            assert_eq!(c.graph.edge_set(), families::torus2(n as usize).edge_set());
            let d = cayley_graph(&TowerSpec::torus2_diagonal(), n).unwrap();
            assert_eq!(d.elements, c.elements);
            assert_eq!(d.graph.edge_set(), families::torus2_diagonal(n as usize).edge_set());
        }
    }

    #[test]
    fn sl2_3_has_24_elements() {
        // Oracle: count 2x2 matrices over F_3 with determinant 1.
        let mut count = 0;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        if (a * d - b * c) % 3 == 1 || (a * d - b * c) % 3 == -2 {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, 24);
        let g = cayley_graph(&TowerSpec::free2_sl2(), 3).unwrap();
        assert_eq!(g.index(), 24);
        assert!((0..24).all(|v| g.graph.degree(v) == 4));
    }

    #[test]
    fn sl2_orders() {
        for p in [5u64, 7] {
            let g = cayley_graph(&TowerSpec::free2_sl2(), p).unwrap();
            assert_eq!(g.index() as u64, p * (p * p - 1));
        }
    }

    #[test]
    fn relators_walk_to_start_everywhere() {
        for (tower, n) in [(TowerSpec::torus2(), 5), (TowerSpec::torus2_diagonal(), 4), (TowerSpec::heisenberg(), 3)] {
            let c = cayley_graph(&tower, n).unwrap();
            let degree = c.graph.degree(0);
            assert!((0..c.index()).all(|v| c.graph.degree(v) == degree));
            for r in tower.relators.iter().flatten() {
                let w = tower.parse_word(r).unwrap();
                assert!((0..c.index()).all(|v| c.walk(v, &w) == v));
            }
        }
        assert_eq!(cayley_graph(&TowerSpec::heisenberg(), 3).unwrap().index(), 27);
    }

    #[test]
    fn errors() {
        let mut t = TowerSpec::torus2();
        t.element_cap = 10;
        assert!(matches!(cayley_graph(&t, 4), Err(TowerError::ElementCapExceeded { .. })));
        assert!(matches!(cayley_graph(&TowerSpec::free2_sl2(), 4), Err(TowerError::BadParameter { .. })));
        let mut bad = TowerSpec::torus2();
        bad.relators = Some(vec!["a a".into()]);
        assert!(matches!(cayley_graph(&bad, 5), Err(TowerError::RelatorNotTrivial { .. })));
        let mut sing = TowerSpec::free2_sl2();
        sing.generators[0].image = vec![1, 0, 0, 0];
        assert!(matches!(cayley_graph(&sing, 5), Err(TowerError::NotInvertible { .. })));
    }

    #[test]
    fn rank_gradient_terms() {
        let t = known_rank_gradient_term(&TowerSpec::free2_sl2(), 3).unwrap();
        assert_eq!(t, RankGradientTerm::Known { generators: 25, index: 24, term: Exact::new(25, 24) });
        for n in 3..7u64 {
            let t = known_rank_gradient_term(&TowerSpec::torus2(), n).unwrap();
            let nn = (n * n) as i64;
            assert!(matches!(t, RankGradientTerm::Known { generators: 2, term, .. } if term == Exact::new(2, nn)));
        }
        assert_eq!(known_rank_gradient_term(&TowerSpec::heisenberg(), 3).unwrap(), RankGradientTerm::Unavailable);
    }

    #[test]
    fn descriptor_round_trip() {
        let t = TowerSpec::torus2_diagonal().with_levels([4, 6, 8]);
        let back = TowerSpec::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(TowerSpec::from_json(r#"{"family_name":"x","quotients":{"kind":"sl2"},"group":{"kind":"free"},"generators":[{"label":"a","image":[1,1,0,1]}],"levels":[4]}"#).is_err());
    }
}
