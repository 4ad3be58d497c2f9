//! Eigensolvers and spectral measurements of hierarchies.

pub mod eigen;
mod metrics;

pub use eigen::{largest_eigenpair, smallest_eigenpairs, EigenBasis, DENSE_EIGEN_LIMIT, EIGEN_TOL};
pub use metrics::{
    check_eigenvalue_bound, check_interlacing, check_isometry, check_sin_theta_bound,
    eigenvalue_error, evaluate, kmeans_cost, lift_lengths_lemma_check, projection_is_orthogonal,
    relative_eigenvalue_error, restricted_epsilon, restricted_epsilons, sin_theta_frobenius,
    EigenBoundReport, EigenBoundRow, Evaluation, InterlacingReport, IsometryReport, LemmaRow,
    SinThetaReport, BOUND_SLACK, LAMBDA2_FLOOR,
};
