use nalgebra::DMatrix;

use crate::coarsening::Partition;
use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::linalg::{psd_sqrt, pseudo_inverse_sqrt, require_dense};
use crate::spectral::eigen::{null_tolerance, smallest_eigenpairs};

/// The pair `(B_l, A_l)` tracked across levels: `B_l` is the subspace
/// representation carried down by the coarsening matrices and
/// `A_l = B_l (B_l^T L_l B_l)^{+1/2}` is the matrix whose variation is
/// measured by the local costs.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    b: DMatrix<f64>,
    a: DMatrix<f64>,
}

impl SubspaceBasis {
    /// `B_0 = A_0 = U_k Lambda_k^{+1/2}`; null eigenvalue columns are zero.
    pub fn initial(l: &Laplacian, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "subspace dimension must be at least 1".into(),
            ));
        }
        let eig = smallest_eigenpairs(l, k)?;
        let b = eig.scaled_by_inverse_sqrt(null_tolerance(l));
        Ok(Self { a: b.clone(), b })
    }

    /// Basis for an arbitrary subspace spanned by the orthonormal columns of
    /// `v`. The variation costs depend on `A_0 = V V^T L^{+1/2}` only through
    /// `A_0 A_0^T = V (V^T L^+ V) V^T`, so the `N x k` factor
    /// `V (V^T L^+ V)^{1/2}` is used in its place, for `B_0` as well.
    pub fn from_explicit(l: &Laplacian, v: &DMatrix<f64>) -> Result<Self> {
        if v.nrows() != l.dim() {
            return Err(Error::DimensionMismatch {
                expected: l.dim(),
                actual: v.nrows(),
            });
        }
        require_dense(l.dim())?;
        let n = l.dim();
        let eig = smallest_eigenpairs(l, n)?;
        let tol = null_tolerance(l);
        let mut l_pinv_v = DMatrix::zeros(n, v.ncols());
        let proj = eig.vectors.transpose() * v;
        for (c, &lam) in eig.values.iter().enumerate() {
            if lam > tol {
                let row = proj.row(c) / lam;
                l_pinv_v += eig.vectors.column(c) * row;
            }
        }
        let gram = v.transpose() * l_pinv_v;
        let b = v * psd_sqrt(&gram);
        Ok(Self { a: b.clone(), b })
    }

    /// Builds `A = B (B^T L B)^{+1/2}` for a given `B`.
    pub fn from_b(l: &Laplacian, b: DMatrix<f64>) -> Self {
        let a = &b * pseudo_inverse_sqrt(&l.gram(&b));
        Self { b, a }
    }

    /// Moves to the next level: `B' = P B` and
    /// `A' = B' (B'^T L' B')^{+1/2}`.
    pub fn advance(&self, p: &Partition, l_next: &Laplacian) -> Result<Self> {
        if l_next.dim() != p.n_coarse() {
            return Err(Error::DimensionMismatch {
                expected: p.n_coarse(),
                actual: l_next.dim(),
            });
        }
        Ok(Self::from_b(l_next, p.project_matrix(&self.b)?))
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn k(&self) -> usize {
        self.b.ncols()
    }

    pub fn dim(&self) -> usize {
        self.b.nrows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn path3_initial_basis() {
        let l = WeightedGraph::path(3).laplacian();
        let s = SubspaceBasis::initial(&l, 2).unwrap();
        let h = 0.5f64.sqrt();
        let expect = DMatrix::from_row_slice(3, 2, &[0.0, h, 0.0, 0.0, 0.0, -h]);
        assert!((s.b() - &expect).abs().max() < 1e-12);
        assert_eq!(s.a(), s.b());
    }

    #[test]
    fn identity_advance_keeps_a() {
        let l = WeightedGraph::cycle(7).laplacian();
        let s = SubspaceBasis::initial(&l, 3).unwrap();
        let t = s.advance(&Partition::identity(7), &l).unwrap();
        assert!((t.a() - s.a()).abs().max() < 1e-10);
    }

    #[test]
    fn k1_stays_zero() {
        let l = WeightedGraph::path(4).laplacian();
        let s = SubspaceBasis::initial(&l, 1).unwrap();
        assert_eq!(s.a().abs().max(), 0.0);
        let p = Partition::new(4, vec![vec![0, 1], vec![2], vec![3]]).unwrap();
        let lc = crate::coarsening::coarsen_laplacian(&l, &p).unwrap();
        assert_eq!(s.advance(&p, &lc).unwrap().a().abs().max(), 0.0);
    }

    #[test]
    fn explicit_eigenspace_matches_initial_gram() {
        let l = WeightedGraph::cycle(9).laplacian();
        let eig = smallest_eigenpairs(&l, 3).unwrap();
        let from_v = SubspaceBasis::from_explicit(&l, &eig.vectors).unwrap();
        let init = SubspaceBasis::initial(&l, 3).unwrap();
        let g1 = from_v.a() * from_v.a().transpose();
        let g2 = init.a() * init.a().transpose();
        assert!((g1 - g2).abs().max() < 1e-10);
    }
}
