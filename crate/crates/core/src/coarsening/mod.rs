//! Laplacian consistent coarsening: partitions, the reduction and lifting
//! operators they induce, and multi-level hierarchies.

mod hierarchy;
mod json;
mod kron;
mod partition;

pub use hierarchy::{Gammas, Hierarchy, HierarchyLevel, LevelMap};
pub use json::{
    hierarchy_from_json, hierarchy_to_json, load_hierarchy, save_hierarchy, SCHEMA_VERSION,
};
pub use kron::{KronMap, KRON_LIMIT};
pub(crate) use partition::induced_components;
pub use partition::{coarsen_laplacian, Partition};
