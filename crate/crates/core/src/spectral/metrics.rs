use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::{null_tolerance, smallest_eigenpairs, EigenBasis};
use crate::coarsening::{Hierarchy, Partition};
use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::linalg::{max_eigenvalue, require_dense, symmetric_eigen};

/// Absolute slack allowed on every checked inequality.
pub const BOUND_SLACK: f64 = 1e-9;

/// Smallest `lambda_2` accepted as evidence of connectivity.
pub const LAMBDA2_FLOOR: f64 = 1e-12;

fn require_k(k: usize, limit: usize, what: &str) -> Result<()> {
    if k == 0 || k > limit {
        Err(Error::InvalidArgument(format!(
            "k = {k} must lie in [1, {limit}] ({what})"
        )))
    } else {
        Ok(())
    }
}

/// Restricted approximation constants `eps_1 <= ... <= eps_k` of the
/// hierarchy on the leading eigenspaces `U_1, ..., U_k` of the base
/// Laplacian: `eps_i = ||Pi^perp U_i Lambda_i^{+1/2}||_L`.
pub fn restricted_epsilons(h: &Hierarchy, k: usize) -> Result<Vec<f64>> {
    h.base().require_connected()?;
    require_k(k, h.n_fine(), "base size")?;
    let eig = smallest_eigenpairs(h.base(), k)?;
    epsilons_from_basis(h, &eig)
}

/// `eps_k` alone.
pub fn restricted_epsilon(h: &Hierarchy, k: usize) -> Result<f64> {
    Ok(*restricted_epsilons(h, k)?.last().expect("k >= 1"))
}

pub(crate) fn epsilons_from_basis(h: &Hierarchy, eig: &EigenBasis) -> Result<Vec<f64>> {
    let z = h.apply_pi_complement_matrix(&eig.scaled_by_inverse_sqrt(null_tolerance(h.base())))?;
    let g = h.base().gram(&z);
    Ok((1..=eig.k())
        .map(|i| {
            let lead = g.view((0, 0), (i, i)).into_owned();
            max_eigenvalue(&lead).max(0.0).sqrt()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryReport {
    pub epsilon: f64,
    pub trials: usize,
    /// Largest amount by which `(1 - eps)|x|_L <= |P x|_{L_c} <= (1 + eps)|x|_L`
    /// was exceeded, relative to `|x|_L`; zero when every trial passed.
    pub max_violation: f64,
}

impl IsometryReport {
    pub fn ok(&self) -> bool {
        self.max_violation <= BOUND_SLACK
    }
}

/// Samples random `x` in the span of the first `k` eigenvectors and checks
/// that the coarse norm stays within the `(1 +- eps_k)` envelope.
pub fn check_isometry(h: &Hierarchy, k: usize, trials: usize, seed: u64) -> Result<IsometryReport> {
    h.base().require_connected()?;
    require_k(k, h.n_fine(), "base size")?;
    let eig = smallest_eigenpairs(h.base(), k)?;
    let epsilon = *epsilons_from_basis(h, &eig)?.last().expect("k >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = DMatrix::from_fn(k, trials, |_, _| rng.gen_range(-1.0..=1.0));
    let x = &eig.vectors * coeffs;
    let xc = h.project_matrix(&x)?;
    let mut max_violation: f64 = 0.0;
    for t in 0..trials {
        let fine = h
            .base()
            .quadratic_form(x.column(t).as_slice())
            .max(0.0)
            .sqrt();
        let coarse = h
            .coarsest()
            .quadratic_form(xc.column(t).as_slice())
            .max(0.0)
            .sqrt();
        let excess = ((1.0 - epsilon) * fine - coarse).max(coarse - (1.0 + epsilon) * fine);
        if excess > 0.0 {
            max_violation = max_violation.max(if fine > 0.0 { excess / fine } else { excess });
        }
    }
    Ok(IsometryReport {
        epsilon,
        trials,
        max_violation,
    })
}

/// Mean over `i <= k` of `|lambda_c_i - lambda_i| / lambda_i`; terms with
/// a null `lambda_i` count as zero.
pub fn relative_eigenvalue_error(lambda: &[f64], lambda_c: &[f64], null_tol: f64) -> f64 {
    let k = lambda.len().min(lambda_c.len());
    if k == 0 {
        return 0.0;
    }
    let total: f64 = lambda
        .iter()
        .zip(lambda_c)
        .filter(|(&l, _)| l > null_tol)
        .map(|(&l, &lc)| (lc - l).abs() / l)
        .sum();
    total / k as f64
}

/// Mean relative error of the first `k` eigenvalues of `lc` against `l`.
pub fn eigenvalue_error(l: &Laplacian, lc: &Laplacian, k: usize) -> Result<f64> {
    require_k(k, lc.dim(), "coarse size")?;
    let lam = smallest_eigenpairs(l, k)?.values;
    let lam_c = coarse_eigenvalues(lc, k)?;
    Ok(relative_eigenvalue_error(&lam, &lam_c, null_tolerance(l)))
}

fn coarse_eigenvalues(lc: &Laplacian, k: usize) -> Result<Vec<f64>> {
    Ok(smallest_eigenpairs(lc, k)?.values)
}

/// Full dense eigendecomposition of the coarsest Laplacian.
fn coarse_eigen_full(h: &Hierarchy) -> Result<(Vec<f64>, DMatrix<f64>)> {
    require_dense(h.n_coarse())?;
    Ok(symmetric_eigen(&h.coarsest().to_dense()))
}

/// `|| U~_{k perp}^T P U_k ||_F`: the Frobenius norm of the sines of the
/// canonical angles between `U_k` and the lifted coarse eigenspace.
pub fn sin_theta_frobenius(h: &Hierarchy, k: usize) -> Result<f64> {
    require_k(k, h.n_coarse(), "coarse size")?;
    let eig = smallest_eigenpairs(h.base(), k)?;
    Ok(sin_theta_sq_from_basis(h, &eig)?.sqrt())
}

fn sin_theta_sq_from_basis(h: &Hierarchy, eig: &EigenBasis) -> Result<f64> {
    let k = eig.k();
    let (_, uc) = coarse_eigen_full(h)?;
    let pu = h.project_matrix(&eig.vectors)?;
    let m = uc.transpose() * pu;
    Ok(m.rows(k, m.nrows() - k).norm_squared())
}

/// One index of the eigenvalue bound check.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenBoundRow {
    pub i: usize,
    pub lambda: f64,
    pub lambda_c: f64,
    pub epsilon: f64,
    pub lower: f64,
    /// `None` when `eps_i^2 < lambda_2 / lambda_i` fails.
    pub upper: Option<f64>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenBoundReport {
    pub gamma1: f64,
    pub gamma2: f64,
    pub rows: Vec<EigenBoundRow>,
}

impl EigenBoundReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn preconditions_unmet(&self) -> usize {
        self.rows.iter().filter(|r| r.upper.is_none()).count()
    }
}

/// For `i = 2..k`: `gamma1 lambda_i <= lambda_c_i` and, when
/// `eps_i^2 < lambda_2 / lambda_i`,
/// `lambda_c_i <= gamma2 (1 + eps_i)^2 lambda_i / (1 - eps_i^2 lambda_i / lambda_2)`.
pub fn check_eigenvalue_bound(h: &Hierarchy, k: usize) -> Result<EigenBoundReport> {
    h.base().require_connected()?;
    require_k(k, h.n_coarse(), "coarse size")?;
    let eig = smallest_eigenpairs(h.base(), k)?;
    let eps = epsilons_from_basis(h, &eig)?;
    eigen_bounds(h, &eig, &eps)
}

fn lambda2(eig: &EigenBasis, l: &Laplacian) -> Result<f64> {
    let l2 = if eig.k() >= 2 {
        eig.values[1]
    } else {
        smallest_eigenpairs(l, 2.min(l.dim()))?
            .values
            .get(1)
            .copied()
            .unwrap_or(0.0)
    };
    if l.dim() >= 2 && l2 <= LAMBDA2_FLOOR {
        return Err(Error::Disconnected { components: 2 });
    }
    Ok(l2)
}

fn eigen_bounds(h: &Hierarchy, eig: &EigenBasis, eps: &[f64]) -> Result<EigenBoundReport> {
    let gammas = h.interlacing_gammas()?;
    let k = eig.k();
    let lam_c = coarse_eigenvalues(h.coarsest(), k)?;
    let l2 = lambda2(eig, h.base())?;
    let rows = (1..k)
        .map(|idx| {
            let lambda = eig.values[idx];
            let e = eps[idx];
            let lower = gammas.gamma1 * lambda;
            let upper = (e * e < l2 / lambda)
                .then(|| gammas.gamma2 * (1.0 + e).powi(2) * lambda / (1.0 - e * e * lambda / l2));
            let ok = lower <= lam_c[idx] + BOUND_SLACK
                && upper.is_none_or(|u| lam_c[idx] <= u + BOUND_SLACK);
            EigenBoundRow {
                i: idx + 1,
                lambda,
                lambda_c: lam_c[idx],
                epsilon: e,
                lower,
                upper,
                ok,
            }
        })
        .collect();
    Ok(EigenBoundReport {
        gamma1: gammas.gamma1,
        gamma2: gammas.gamma2,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SinThetaReport {
    Checked {
        measured_sq: f64,
        bound: f64,
    },
    /// `lambda_{k+1} = lambda_k`: the bound is undefined.
    SkippedZeroGap,
}

impl SinThetaReport {
    pub fn ok(&self) -> bool {
        match self {
            SinThetaReport::Checked { measured_sq, bound } => *measured_sq <= bound + BOUND_SLACK,
            SinThetaReport::SkippedZeroGap => true,
        }
    }
}

/// `||sin Theta||_F^2 <= (sum_i lambda_i ((1 + eps_i)^2 / gamma1 - 1)
/// + lambda_k sum_i eps_i) / (lambda_{k+1} - lambda_k)`.
pub fn check_sin_theta_bound(h: &Hierarchy, k: usize) -> Result<SinThetaReport> {
    h.base().require_connected()?;
    require_k(k, h.n_coarse(), "coarse size")?;
    require_k(k + 1, h.n_fine(), "base size")?;
    let eig = smallest_eigenpairs(h.base(), k + 1)?;
    let lam_next = eig.values[k];
    let eig = eig.truncate(k);
    let eps = epsilons_from_basis(h, &eig)?;
    sintheta_bound(h, &eig, &eps, lam_next)
}

fn sintheta_bound(
    h: &Hierarchy,
    eig: &EigenBasis,
    eps: &[f64],
    lam_next: f64,
) -> Result<SinThetaReport> {
    let k = eig.k();
    let lam_k = eig.values[k - 1];
    let gap = lam_next - lam_k;
    if gap <= 1e-9 * lam_next.abs().max(1.0) {
        return Ok(SinThetaReport::SkippedZeroGap);
    }
    let gamma1 = h.interlacing_gammas()?.gamma1;
    let spectral: f64 = eig
        .values
        .iter()
        .zip(eps)
        .map(|(&l, &e)| l * ((1.0 + e).powi(2) / gamma1 - 1.0))
        .sum();
    let bound = (spectral + lam_k * eps.iter().sum::<f64>()) / gap;
    Ok(SinThetaReport::Checked {
        measured_sq: sin_theta_sq_from_basis(h, eig)?,
        bound,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterlacingReport {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Largest violation of `gamma1 lambda_i <= lambda_c_i <= gamma2 lambda_{i+N-n}`.
    pub max_violation: f64,
}

impl InterlacingReport {
    pub fn ok(&self) -> bool {
        self.max_violation <= BOUND_SLACK
    }
}

/// Interlacing of the full spectra with the exact gammas (dense).
pub fn check_interlacing(h: &Hierarchy) -> Result<InterlacingReport> {
    require_dense(h.n_fine())?;
    let g = h.interlacing_gammas()?;
    let (lam, _) = symmetric_eigen(&h.base().to_dense());
    let (lam_c, _) = coarse_eigen_full(h)?;
    let shift = h.n_fine() - h.n_coarse();
    let max_violation = lam_c
        .iter()
        .enumerate()
        .map(|(i, &lc)| (g.gamma1 * lam[i] - lc).max(lc - g.gamma2 * lam[i + shift]))
        .fold(0.0f64, f64::max);
    Ok(InterlacingReport {
        gamma1: g.gamma1,
        gamma2: g.gamma2,
        max_violation,
    })
}

/// k-means cost of the rows of `x` under `p`: the sum over clusters of the
/// squared distances to the cluster mean.
pub fn kmeans_cost(x: &DMatrix<f64>, p: &Partition) -> Result<f64> {
    if x.nrows() != p.n_fine() {
        return Err(Error::DimensionMismatch {
            expected: p.n_fine(),
            actual: x.nrows(),
        });
    }
    let centred = x - p.lift_matrix(&p.project_matrix(x)?)?;
    Ok(centred.norm_squared())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaRow {
    pub i: usize,
    /// `||Pi^perp u_i||_2^2`.
    pub residual_sq: f64,
    pub epsilon: f64,
    /// `Pi` is an orthogonal projection, which the inequality relies on.
    pub orthogonal: bool,
    /// `residual_sq <= epsilon` within [`BOUND_SLACK`].
    pub holds: bool,
}

impl LemmaRow {
    /// Fails only where the inequality is expected to hold.
    pub fn ok(&self) -> bool {
        self.holds || !self.orthogonal
    }
}

/// Whether the composed `Pi = P+ P` is symmetric, i.e. every row of the
/// composed `P` is constant on its support. Single-level hierarchies always
/// qualify; deeper ones only when the nested set sizes line up.
pub fn projection_is_orthogonal(h: &Hierarchy) -> Result<bool> {
    let norms = h.composed_row_norms_sq()?;
    let sizes = h.composed_partition()?.set_sizes();
    Ok(norms
        .iter()
        .zip(sizes)
        .all(|(&nsq, s)| (nsq * s as f64 - 1.0).abs() <= 1e-12))
}

/// `||Pi^perp u_i||_2^2 <= eps_i` for every `i <= k`.
///
/// The inequality is derived from `P^T L_c P = Pi L Pi`, which needs a
/// symmetric `Pi`. Multi-level hierarchies whose composed projection is
/// oblique can violate it, so rows carry the `orthogonal` flag and only
/// count as failures when it is set.
pub fn lift_lengths_lemma_check(h: &Hierarchy, k: usize) -> Result<Vec<LemmaRow>> {
    h.base().require_connected()?;
    require_k(k, h.n_fine(), "base size")?;
    if !h.is_consistent() {
        return Err(Error::NotConsistent);
    }
    let eig = smallest_eigenpairs(h.base(), k)?;
    let eps = epsilons_from_basis(h, &eig)?;
    lemma_rows(h, &eig, &eps)
}

fn lemma_rows(h: &Hierarchy, eig: &EigenBasis, eps: &[f64]) -> Result<Vec<LemmaRow>> {
    let orthogonal = projection_is_orthogonal(h)?;
    let r = h.apply_pi_complement_matrix(&eig.vectors)?;
    Ok((0..eig.k())
        .map(|c| {
            let residual_sq = r.column(c).norm_squared();
            LemmaRow {
                i: c + 1,
                residual_sq,
                epsilon: eps[c],
                orthogonal,
                holds: residual_sq <= eps[c] + BOUND_SLACK,
            }
        })
        .collect())
}

/// Every measurement of one `(hierarchy, k)` cell, sharing a single
/// eigensolve of the base graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub k: usize,
    pub epsilons: Vec<f64>,
    pub eig_err: f64,
    /// `None` when the coarse graph is too large for a dense solve.
    pub sin_theta: Option<f64>,
    /// `None` for hierarchies that are not consistent coarsenings.
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub eigen_bounds: Option<EigenBoundReport>,
    pub sintheta_bound: Option<SinThetaReport>,
    pub lemma: Option<Vec<LemmaRow>>,
    /// Measured `eps_k` does not exceed the hierarchy's error bound.
    pub eps_within_bound: bool,
}

impl Evaluation {
    pub fn epsilon(&self) -> f64 {
        *self.epsilons.last().expect("k >= 1")
    }

    /// True when every applicable bound holds.
    pub fn bounds_ok(&self) -> bool {
        self.eps_within_bound
            && self.eigen_bounds.as_ref().is_none_or(|r| r.ok())
            && self.sintheta_bound.as_ref().is_none_or(|r| r.ok())
            && self
                .lemma
                .as_ref()
                .is_none_or(|rows| rows.iter().all(LemmaRow::ok))
    }
}

/// Restricted epsilon, eigenvalue error, sin-theta and all bound checks at
/// subspace dimension `k` (`k <= ` coarse size).
pub fn evaluate(h: &Hierarchy, k: usize) -> Result<Evaluation> {
    h.base().require_connected()?;
    require_k(k, h.n_coarse(), "coarse size")?;
    let with_next = k < h.n_fine();
    let full = smallest_eigenpairs(h.base(), if with_next { k + 1 } else { k })?;
    let eig = full.truncate(k);
    let epsilons = epsilons_from_basis(h, &eig)?;
    let lam_c = coarse_eigenvalues(h.coarsest(), k)?;
    let eig_err = relative_eigenvalue_error(&eig.values, &lam_c, null_tolerance(h.base()));
    let dense_coarse = h.n_coarse() <= crate::linalg::DENSE_LIMIT;
    let sin_theta = if dense_coarse {
        Some(sin_theta_sq_from_basis(h, &eig)?.sqrt())
    } else {
        None
    };
    let eps_k = *epsilons.last().expect("k >= 1");
    let eps_within_bound = h.eps_bound().is_none_or(|b| eps_k <= b + BOUND_SLACK);
    let (gamma1, gamma2, eigen_bounds, sintheta_bound, lemma) = if h.is_consistent() {
        let g = h.interlacing_gammas()?;
        let eb = eigen_bounds(h, &eig, &epsilons)?;
        let sb = if with_next && dense_coarse {
            Some(sintheta_bound(h, &eig, &epsilons, full.values[k])?)
        } else {
            None
        };
        let lemma = lemma_rows(h, &eig, &epsilons)?;
        (Some(g.gamma1), Some(g.gamma2), Some(eb), sb, Some(lemma))
    } else {
        (None, None, None, None, None)
    };
    Ok(Evaluation {
        k,
        epsilons,
        eig_err,
        sin_theta,
        gamma1,
        gamma2,
        eigen_bounds,
        sintheta_bound,
        lemma,
        eps_within_bound,
    })
}
