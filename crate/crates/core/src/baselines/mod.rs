//! Comparison methods: heavy edge matching, algebraic distance, affinity,
//! and Kron reduction.
//!
//! The three matching-style methods run the local variation greedy engine
//! on the edge family with a method-specific cost in place of the local
//! variation cost and no error budget.

mod kron;
mod test_vectors;

use nalgebra::DMatrix;

pub use kron::{kron_keep_set, kron_level, kron_reduce};
pub use test_vectors::{
    gauss_seidel_test_vectors, jacobi_test_vectors, JACOBI_OMEGA, JACOBI_SWEEPS,
};

use crate::coarsening::Hierarchy;
use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::variation::{greedy_contract, CandidateFamily, FamilyKind};

/// Comparison method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Baseline {
    HeavyEdge,
    AlgebraicDistance,
    Affinity,
    Kron,
}

impl Baseline {
    pub fn tag(self) -> &'static str {
        match self {
            Baseline::HeavyEdge => "heavy-edge",
            Baseline::AlgebraicDistance => "algebraic-distance",
            Baseline::Affinity => "affinity",
            Baseline::Kron => "kron",
        }
    }
}

/// `-w_ij / max(deg_i, deg_j)`: heaviest normalized edges come first.
pub fn heavy_edge_cost(l: &Laplacian, i: usize, j: usize) -> f64 {
    -l.weight(i, j) / l.degree(i).max(l.degree(j))
}

/// Euclidean distance between rows `i` and `j` of the test vectors.
pub fn algebraic_distance_cost(x: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    (0..x.ncols())
        .map(|q| (x[(i, q)] - x[(j, q)]).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// `-(x_i . x_j)^2 / (|x_i|^2 |x_j|^2)`, or 0 if either row vanishes.
pub fn affinity_cost(x: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    let (mut dot, mut ni, mut nj) = (0.0, 0.0, 0.0);
    for q in 0..x.ncols() {
        dot += x[(i, q)] * x[(j, q)];
        ni += x[(i, q)] * x[(i, q)];
        nj += x[(j, q)] * x[(j, q)];
    }
    if ni == 0.0 || nj == 0.0 {
        0.0
    } else {
        -(dot * dot) / (ni * nj)
    }
}

/// Coarsens `l` towards `n_target` vertices with a comparison method.
///
/// `k` is the number of test vectors for the relaxation-based methods and
/// level `l` draws them with seed `seed + l`. Baseline levels carry no
/// variation cost, so the hierarchy has no error bound.
pub fn run_baseline(
    l: &Laplacian,
    method: Baseline,
    n_target: usize,
    k: usize,
    seed: u64,
) -> Result<Hierarchy> {
    if n_target == 0 {
        return Err(Error::InvalidArgument(
            "target size must be at least 1".into(),
        ));
    }
    let mut h = Hierarchy::new(l.clone());
    h.set_target(Some(n_target));
    match method {
        Baseline::AlgebraicDistance => {
            h.set_meta("jacobi_omega", JACOBI_OMEGA.to_string());
            h.set_meta("jacobi_sweeps", JACOBI_SWEEPS.to_string());
        }
        Baseline::Affinity => h.set_meta("gauss_seidel_sweeps", "1"),
        _ => {}
    }
    if matches!(method, Baseline::AlgebraicDistance | Baseline::Affinity) {
        h.set_meta("test_vectors", k.to_string());
        h.set_meta("seed", seed.to_string());
    }
    let mut level = 0u64;
    while h.n_coarse() > n_target {
        let current = h.coarsest().clone();
        if method == Baseline::Kron {
            let m = current.dim();
            let keep = kron_keep_set(&current, n_target)?;
            if keep.len() >= m {
                h.set_stalled(true);
                break;
            }
            h.push_kron_level(&keep, method.tag())?;
            continue;
        }
        let level_seed = seed.wrapping_add(level);
        let x = match method {
            Baseline::AlgebraicDistance => {
                Some(jacobi_test_vectors(&current, k, JACOBI_SWEEPS, level_seed)?)
            }
            Baseline::Affinity => Some(gauss_seidel_test_vectors(&current, k, 1, level_seed)?),
            _ => None,
        };
        let cost = |set: &[usize]| {
            let (i, j) = (set[0], set[1]);
            match (method, &x) {
                (Baseline::HeavyEdge, _) => heavy_edge_cost(&current, i, j),
                (Baseline::AlgebraicDistance, Some(x)) => algebraic_distance_cost(x, i, j),
                (Baseline::Affinity, Some(x)) => affinity_cost(x, i, j),
                _ => unreachable!("test vectors exist for relaxation methods"),
            }
        };
        let family = CandidateFamily::build(&current, FamilyKind::Edge, cost);
        let outcome = greedy_contract(&current, family, cost, f64::INFINITY, n_target, false);
        if outcome.partition.is_identity() {
            h.set_stalled(true);
            break;
        }
        h.push_level(outcome.partition, None, method.tag())?;
        level += 1;
    }
    Ok(h)
}
