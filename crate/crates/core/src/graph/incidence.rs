use nalgebra::DMatrix;

use super::WeightedGraph;

/// Weighted incidence matrix `S` with `S^T S = L`: the row of edge
/// `{i, j}` (`i < j`) holds `+sqrt(w_ij)` at `i` and `-sqrt(w_ij)` at `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceMatrix {
    n_cols: usize,
    rows: Vec<(usize, usize, f64)>,
}

impl IncidenceMatrix {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        Self {
            n_cols: g.n_vertices(),
            rows: g
                .edges()
                .iter()
                .map(|e| (e.u, e.v, e.weight.sqrt()))
                .collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// `(i, j, sqrt(w))` per row.
    pub fn rows(&self) -> &[(usize, usize, f64)] {
        &self.rows
    }

    /// `S x`, one entry per edge.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols);
        self.rows
            .iter()
            .map(|&(i, j, s)| s * (x[i] - x[j]))
            .collect()
    }

    /// `S^T y`.
    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows.len());
        let mut x = vec![0.0; self.n_cols];
        for (&(i, j, s), &v) in self.rows.iter().zip(y) {
            x[i] += s * v;
            x[j] -= s * v;
        }
        x
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows.len(), self.n_cols);
        for (r, &(i, j, s)) in self.rows.iter().enumerate() {
            m[(r, i)] = s;
            m[(r, j)] = -s;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_edge_row() {
        let s = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap().incidence();
        assert_eq!(s.to_dense(), DMatrix::from_row_slice(1, 2, &[1.0, -1.0]));
        let sts = s.to_dense().transpose() * s.to_dense();
        assert_eq!(sts, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn path3_factorization() {
        let g = WeightedGraph::path(3);
        let s = g.incidence().to_dense();
        assert_eq!(s.shape(), (2, 3));
        assert_eq!(s.transpose() * &s, g.laplacian().to_dense());
    }

    #[test]
    fn transpose_apply_matches_dense() {
        let g = WeightedGraph::new(3, [(0, 1, 4.0), (1, 2, 9.0)]).unwrap();
        let s = g.incidence();
        let y = [1.0, -2.0];
        let dense = s.to_dense().transpose() * nalgebra::DVector::from_column_slice(&y);
        assert_eq!(s.apply_transpose(&y), dense.as_slice());
        assert_eq!(s.apply(&[1.0, 0.0, 1.0]), vec![2.0, -3.0]);
    }
}
