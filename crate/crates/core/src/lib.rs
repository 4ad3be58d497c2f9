//! Multi-level graph coarsening with restricted spectral approximation
//! guarantees.
//!
//! The entry points are [`variation::coarsen_multilevel`] for local
//! variation coarsening, [`baselines::run_baseline`] for the comparison
//! methods, [`run_method`] to dispatch on a method name, and the
//! measurements in [`spectral`].

pub mod baselines;
pub mod coarsening;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod method;
pub mod spectral;
pub mod variation;

pub use coarsening::{coarsen_laplacian, Hierarchy, Partition};
pub use error::{Error, Result};
pub use graph::{Laplacian, WeightedGraph};
pub use method::{run_method, Method};
