//! Hyperfinite partitions, their validation, and small-set expansion.

mod covering;
mod expansion;
mod partition;

use thiserror::Error;

pub use covering::{partition_from_covering, CoveringFamily, CoveringPartition};
pub use expansion::{
    min_small_set_expansion, min_small_set_expansion_with, ExpansionOptions, ExpansionReport, RootMode, DEFAULT_EXPANSION_CAP,
};
pub use partition::{
    box_face_edges, box_partition, partition_compression, torus_coordinates, tree_partition, validate_partition, Partition,
    PartitionValidation, TreePartition,
};

use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid covering family: {0}")]
    InvalidFamily(String),
    #[error("set size {m} is above the expansion cap {cap}")]
    CapExceeded { m: usize, cap: usize },
}
