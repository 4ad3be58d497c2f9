use std::fmt;
use std::str::FromStr;

use crate::baselines::{run_baseline, Baseline};
use crate::coarsening::Hierarchy;
use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::variation::{coarsen_multilevel, FamilyKind, Subspace};

/// Every coarsening method under one name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    LocalVarEdge,
    LocalVarNeigh,
    HeavyEdge,
    AlgebraicDistance,
    Affinity,
    Kron,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::LocalVarEdge,
        Method::LocalVarNeigh,
        Method::HeavyEdge,
        Method::AlgebraicDistance,
        Method::Affinity,
        Method::Kron,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::LocalVarEdge => "local-var-edge",
            Method::LocalVarNeigh => "local-var-neigh",
            Method::HeavyEdge => "heavy-edge",
            Method::AlgebraicDistance => "algebraic-distance",
            Method::Affinity => "affinity",
            Method::Kron => "kron",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

/// Coarsens `l` towards `n_target` vertices with `method`.
///
/// `k` is the preserved eigenspace dimension for local variation and the
/// number of test vectors for the relaxation baselines. `eps_threshold`
/// only applies to local variation.
pub fn run_method(
    l: &Laplacian,
    method: Method,
    n_target: usize,
    k: usize,
    eps_threshold: f64,
    seed: u64,
) -> Result<Hierarchy> {
    let baseline = |b| run_baseline(l, b, n_target, k, seed);
    match method {
        Method::LocalVarEdge => coarsen_multilevel(
            l,
            &Subspace::Eigen(k),
            eps_threshold,
            n_target,
            FamilyKind::Edge,
        ),
        Method::LocalVarNeigh => coarsen_multilevel(
            l,
            &Subspace::Eigen(k),
            eps_threshold,
            n_target,
            FamilyKind::Neighborhood,
        ),
        Method::HeavyEdge => baseline(Baseline::HeavyEdge),
        Method::AlgebraicDistance => baseline(Baseline::AlgebraicDistance),
        Method::Affinity => baseline(Baseline::Affinity),
        Method::Kron => baseline(Baseline::Kron),
    }
}
