use serde::{Deserialize, Serialize};

use super::partition::{bfs_chunks, Partition};
use super::HyperError;
use crate::exact::Exact;
use crate::graph::{Graph, VertexId};

/// Almost-disjoint small-boundary sets covering most of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringFamily {
    pub sets: Vec<Vec<VertexId>>,
    /// Slack `ω < 1`: either given, or the smallest value the sets satisfy.
    pub omega: Exact,
    /// Size cap `L_ω`; defaults to the largest set.
    pub size_cap: usize,
    pub coverage: Exact,
    /// Smallest `ω` the sets satisfy, as measured on ingestion.
    pub measured_omega: Exact,
}

/// Per-set and global statistics; the measured `ω` is their maximum.
fn measure(g: &Graph, sets: &[Vec<VertexId>]) -> Result<(Exact, Exact), HyperError> {
    let n = g.vertex_count();
    let mut multiplicity = vec![0usize; n];
    for (i, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(HyperError::InvalidFamily(format!("set {i} is empty")));
        }
        let mut sorted = set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != set.len() || sorted.last().is_some_and(|&v| v >= n) {
            return Err(HyperError::InvalidFamily(format!("set {i} repeats a vertex or is out of range")));
        }
        for &v in set {
            multiplicity[v] += 1;
        }
    }
    let covered = multiplicity.iter().filter(|&&m| m > 0).count();
    let coverage = Exact::ratio(covered, n);
    let mut omega = Exact::one() - coverage.clone();
    let mut member = vec![false; n];
    for set in sets {
        for &v in set {
            member[v] = true;
        }
        let private = set.iter().filter(|&&v| multiplicity[v] == 1).count();
        let boundary = set.iter().flat_map(|&v| g.neighbors(v)).filter(|&w| !member[w]).count();
        omega = omega.max(Exact::one() - Exact::ratio(private, set.len())).max(Exact::ratio(boundary, set.len()));
        for &v in set {
            member[v] = false;
        }
    }
    Ok((omega, coverage))
}

impl CoveringFamily {
    /// Checks the four covering conditions against `omega` (or measures the
    /// smallest admissible value) and the size cap.
    pub fn ingest(g: &Graph, sets: Vec<Vec<VertexId>>, omega: Option<Exact>, size_cap: Option<usize>) -> Result<Self, HyperError> {
        if sets.is_empty() {
            return Err(HyperError::InvalidFamily("no sets".into()));
        }
        let (measured_omega, coverage) = measure(g, &sets)?;
        let largest = sets.iter().map(Vec::len).max().unwrap_or(0);
        let size_cap = size_cap.unwrap_or(largest);
        if largest > size_cap {
            return Err(HyperError::InvalidFamily(format!("a set has {largest} vertices, above the cap {size_cap}")));
        }
        let omega = omega.unwrap_or_else(|| measured_omega.clone());
        if measured_omega > omega {
            return Err(HyperError::InvalidFamily(format!(
                "sets need slack {measured_omega} (private fraction, boundary or coverage), above the given {omega}"
            )));
        }
        if omega >= Exact::one() {
            return Err(HyperError::InvalidFamily(format!("slack {omega} is not below 1")));
        }
        Ok(CoveringFamily { sets, omega, size_cap, coverage, measured_omega })
    }

    /// `2|S| ((1 - (1-ω)^2) + 2ω / (1-ω))` with `2|S|` the maximum degree.
    pub fn cut_bound(&self, max_degree: usize) -> Exact {
        let one = Exact::one();
        let rest = &one - &self.omega;
        let two_s = Exact::ratio(max_degree, 1);
        two_s * ((&one - &(&rest * &rest)) + Exact::from_int(2) * self.omega.clone() / rest)
    }
}

/// Result of [`partition_from_covering`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringPartition {
    pub partition: Partition,
    pub private_blocks: usize,
    pub leftover_chunks: usize,
    pub cut_bound: Exact,
    pub within_bound: bool,
}

/// Blocks are the private parts of the sets plus BFS chunks (at most
/// `size_cap` vertices) of everything else.
pub fn partition_from_covering(g: &Graph, family: &CoveringFamily) -> Result<CoveringPartition, HyperError> {
    let n = g.vertex_count();
    let mut multiplicity = vec![0usize; n];
    for set in &family.sets {
        for &v in set {
            multiplicity[v] += 1;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for set in &family.sets {
        let private: Vec<VertexId> = set.iter().copied().filter(|&v| multiplicity[v] == 1).collect();
        if !private.is_empty() {
            for v in private {
                label[v] = next;
            }
            next += 1;
        }
    }
    let private_blocks = next;
    let leftover: Vec<VertexId> = (0..n).filter(|&v| label[v] == usize::MAX).collect();
    let chunks = bfs_chunks(g, &leftover, family.size_cap.max(1));
    for chunk in &chunks {
        for &v in chunk {
            label[v] = next;
        }
        next += 1;
    }
    let partition = Partition::from_labels(g, &label)?;
    let cut_bound = family.cut_bound(g.max_degree());
    Ok(CoveringPartition {
        within_bound: partition.cut_ratio <= cut_bound,
        partition,
        private_blocks,
        leftover_chunks: chunks.len(),
        cut_bound,
    })
}
