//! Local variation coarsening: subspace bookkeeping across levels, local
//! variation costs, candidate families, and the single- and multi-level
//! greedy drivers.

mod basis;
mod cost;
mod family;
mod greedy;

use nalgebra::DMatrix;

pub use basis::SubspaceBasis;
pub use cost::{local_laplacian, local_projection_complement, local_variation_cost};
pub use family::{candidate_sets, CandidateFamily, CandidateSet, FamilyKind};
pub(crate) use greedy::greedy_contract;
pub use greedy::LevelOutcome;

use crate::coarsening::{coarsen_laplacian, Hierarchy, Partition};
use crate::error::{Error, Result};
use crate::graph::Laplacian;

/// Subspace whose spectral content the coarsening preserves.
#[derive(Clone, Debug)]
pub enum Subspace {
    /// The first `k` Laplacian eigenvectors.
    Eigen(usize),
    /// An explicit basis with orthonormal columns.
    Explicit(DMatrix<f64>),
}

pub fn method_tag(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::Edge => "local-var-edge",
        FamilyKind::Neighborhood => "local-var-neigh",
    }
}

/// Single-level coarsening by local variation.
///
/// Returns the partition, the coarse Laplacian and the level's variation
/// cost bound `sigma`. `sigma_threshold` may be infinite.
pub fn coarsen_level(
    l: &Laplacian,
    basis: &SubspaceBasis,
    sigma_threshold: f64,
    n_target: usize,
    kind: FamilyKind,
) -> Result<(Partition, Laplacian, f64)> {
    if basis.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            actual: basis.dim(),
        });
    }
    if sigma_threshold.is_nan() || sigma_threshold < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "invalid variation threshold {sigma_threshold}"
        )));
    }
    let a = basis.a();
    let cost = |set: &[usize]| cost::cost_unchecked(l, set, a);
    let family = CandidateFamily::build(l, kind, cost);
    let outcome = greedy_contract(l, family, cost, sigma_threshold, n_target, true);
    let lc = coarsen_laplacian(l, &outcome.partition)?;
    Ok((outcome.partition, lc, outcome.sigma))
}

/// Multi-level coarsening by local variation.
///
/// Levels are added while the graph is larger than `n_target` and the
/// accumulated bound `eps = prod(1 + sigma_l) - 1` is below
/// `eps_threshold`. Each level receives the budget
/// `(1 + eps_threshold) / (1 + eps) - 1`, so a finite threshold is never
/// exceeded. A level that contracts nothing stops the loop and marks the
/// hierarchy as stalled.
pub fn coarsen_multilevel(
    l: &Laplacian,
    subspace: &Subspace,
    eps_threshold: f64,
    n_target: usize,
    kind: FamilyKind,
) -> Result<Hierarchy> {
    if n_target == 0 {
        return Err(Error::InvalidArgument(
            "target size must be at least 1".into(),
        ));
    }
    if eps_threshold.is_nan() || eps_threshold <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "invalid error threshold {eps_threshold}"
        )));
    }
    let mut hierarchy = Hierarchy::new(l.clone());
    hierarchy.set_target(Some(n_target));
    if l.dim() <= n_target {
        return Ok(hierarchy);
    }
    let mut basis = match subspace {
        Subspace::Eigen(k) => SubspaceBasis::initial(l, *k)?,
        Subspace::Explicit(v) => SubspaceBasis::from_explicit(l, v)?,
    };
    let mut eps = 0.0f64;
    while hierarchy.n_coarse() > n_target && eps < eps_threshold {
        let budget = if eps_threshold.is_infinite() {
            f64::INFINITY
        } else {
            ((1.0 + eps_threshold) / (1.0 + eps) - 1.0).max(0.0)
        };
        let current = hierarchy.coarsest();
        let (partition, lc, sigma) = coarsen_level(current, &basis, budget, n_target, kind)?;
        if partition.is_identity() {
            hierarchy.set_stalled(true);
            break;
        }
        basis = basis.advance(&partition, &lc)?;
        hierarchy.push_level(partition, Some(sigma), method_tag(kind))?;
        eps = (1.0 + eps) * (1.0 + sigma) - 1.0;
    }
    Ok(hierarchy)
}
