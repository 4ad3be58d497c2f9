use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Laplacian;

/// Largest graph Kron reduction accepts; the Schur complement is dense.
pub const KRON_LIMIT: usize = 5000;

/// Vertex elimination map of one Kron-reduced level.
///
/// The coarse vector is the restriction `x[keep]`; lifting is the harmonic
/// extension `x[drop] = -L_dd^{-1} L_dk x[keep]`. Restriction followed by
/// extension is a projection, and the Kron-reduced Laplacian equals
/// `H^T L H` for the extension `H`, so the level fits the same
/// reduce/lift scheme as a contraction even though it is not consistent.
#[derive(Clone, Debug, PartialEq)]
pub struct KronMap {
    n_fine: usize,
    keep: Vec<usize>,
    drop: Vec<usize>,
    /// `-L_dd^{-1} L_dk`, `|drop| x |keep|`.
    extension: DMatrix<f64>,
}

impl KronMap {
    /// Eliminates every vertex outside `keep` and returns the map together
    /// with the Schur complement `L_kk - L_kd L_dd^{-1} L_dk`.
    pub fn reduce(l: &Laplacian, keep: &[usize]) -> Result<(Self, Laplacian)> {
        let n = l.dim();
        if n > KRON_LIMIT {
            return Err(Error::TooLarge {
                size: n,
                limit: KRON_LIMIT,
            });
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "Kron reduction needs a non-empty keep set".into(),
            ));
        }
        if let Some(&bad) = keep.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidArgument(format!(
                "keep vertex {bad} outside [0, {n})"
            )));
        }
        let mut is_kept = vec![false; n];
        keep.iter().for_each(|&i| is_kept[i] = true);
        let drop: Vec<usize> = (0..n).filter(|&i| !is_kept[i]).collect();
        let dense = l.to_dense();
        let sub = |rows: &[usize], cols: &[usize]| {
            DMatrix::from_fn(rows.len(), cols.len(), |a, b| dense[(rows[a], cols[b])])
        };
        let l_kk = sub(&keep, &keep);
        let (extension, schur) = if drop.is_empty() {
            (DMatrix::zeros(0, keep.len()), l_kk)
        } else {
            let l_dd = sub(&drop, &drop);
            let l_dk = sub(&drop, &keep);
            let chol = l_dd.cholesky().ok_or_else(|| {
                Error::Singular(
                    "eliminated block is singular: a component has no kept vertex".into(),
                )
            })?;
            let ext = -chol.solve(&l_dk);
            let schur = &l_kk + l_dk.transpose() * &ext;
            (ext, schur)
        };
        let scale = schur.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let reduced = Laplacian::from_dense_offdiagonal(&schur, 1e-13 * scale)?;
        Ok((
            Self {
                n_fine: n,
                keep,
                drop,
                extension,
            },
            reduced,
        ))
    }

    pub fn n_fine(&self) -> usize {
        self.n_fine
    }

    pub fn n_coarse(&self) -> usize {
        self.keep.len()
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn dropped(&self) -> &[usize] {
        &self.drop
    }

    pub fn restrict_matrix(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(self.keep.len(), x.ncols(), |a, c| x[(self.keep[a], c)])
    }

    pub fn extend_matrix(&self, xc: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n_fine, xc.ncols());
        for (a, &i) in self.keep.iter().enumerate() {
            out.row_mut(i).copy_from(&xc.row(a));
        }
        if !self.drop.is_empty() {
            let xd = &self.extension * xc;
            for (a, &i) in self.drop.iter().enumerate() {
                out.row_mut(i).copy_from(&xd.row(a));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn series_resistance_on_path() {
        let l = WeightedGraph::path(3).laplacian();
        let (map, lk) = KronMap::reduce(&l, &[0, 2]).unwrap();
        assert_eq!(lk.dim(), 2);
        assert!((lk.weight(0, 1) - 0.5).abs() < 1e-15);
        let lifted = map.extend_matrix(&DMatrix::from_column_slice(2, 1, &[1.0, 3.0]));
        assert!((lifted[(1, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn keep_all_is_identity() {
        let l = WeightedGraph::cycle(5).laplacian();
        let (_, lk) = KronMap::reduce(&l, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(lk, l);
    }

    #[test]
    fn dropping_a_whole_component_is_singular() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(
            KronMap::reduce(&g.laplacian(), &[0, 1]),
            Err(Error::Singular(_))
        ));
    }
}
