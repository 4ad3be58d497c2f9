//! Small dense helpers shared by the coarsening and measurement code.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest dimension for which dense `N x N` matrices are materialized.
pub const DENSE_LIMIT: usize = 2000;

/// Relative threshold under which eigenvalues of a Gram matrix are treated
/// as zero when forming pseudo-inverse square roots.
pub const PSEUDO_INVERSE_RTOL: f64 = 1e-10;

pub(crate) fn require_dense(size: usize) -> Result<()> {
    if size > DENSE_LIMIT {
        Err(Error::TooLarge {
            size,
            limit: DENSE_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Symmetric eigendecomposition with eigenvalues in ascending order.
///
/// Each eigenvector is signed so that its entry of largest magnitude (first
/// one on ties) is positive, which makes downstream results reproducible.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).clone_owned();
        orient(col.as_mut_slice());
        vectors.set_column(dst, &col);
    }
    (values, vectors)
}

/// Flips `v` so that its largest-magnitude entry is positive.
pub(crate) fn orient(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Largest eigenvalue of a small symmetric matrix.
pub fn max_eigenvalue(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        0 => 0.0,
        1 => m[(0, 0)],
        2 => {
            let (a, b, d) = (m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
            let mean = 0.5 * (a + d);
            let half_diff = 0.5 * (a - d);
            mean + half_diff.hypot(b)
        }
        _ => {
            let sym = (m + m.transpose()) * 0.5;
            sym.symmetric_eigenvalues()
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// `G^{+1/2}` for a symmetric PSD matrix: eigenvalues below
/// `PSEUDO_INVERSE_RTOL * lambda_max` are treated as zero.
pub fn pseudo_inverse_sqrt(g: &DMatrix<f64>) -> DMatrix<f64> {
    spectral_map(
        g,
        |lam, cutoff| if lam > cutoff { 1.0 / lam.sqrt() } else { 0.0 },
    )
}

/// `G^{1/2}` for a symmetric PSD matrix; negative rounding noise is clamped.
pub fn psd_sqrt(g: &DMatrix<f64>) -> DMatrix<f64> {
    spectral_map(g, |lam, _| lam.max(0.0).sqrt())
}

fn spectral_map(g: &DMatrix<f64>, f: impl Fn(f64, f64) -> f64) -> DMatrix<f64> {
    let n = g.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let sym = (g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let lam_max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cutoff = PSEUDO_INVERSE_RTOL * lam_max;
    let mut scaled = eig.eigenvectors.clone();
    for (c, &lam) in eig.eigenvalues.iter().enumerate() {
        let s = f(lam, cutoff);
        scaled.column_mut(c).scale_mut(s);
    }
    scaled * eig.eigenvectors.transpose()
}
