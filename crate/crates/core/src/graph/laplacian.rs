use nalgebra::DMatrix;

use super::{components, WeightedGraph};
use crate::error::{Error, Result};

/// Combinatorial Laplacian `L = D - W` stored as a symmetric weighted
/// adjacency in CSR form.
///
/// The diagonal is never stored: products are evaluated edge-wise as
/// `(Lx)_i = sum_j w_ij (x_i - x_j)`, so constant vectors map to exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Laplacian {
    dim: usize,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
}

impl Laplacian {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        Self::from_sorted_edges(
            g.n_vertices(),
            g.edges().iter().map(|e| (e.u, e.v, e.weight)),
        )
    }

    /// Builds from edges with `u < v`, positive weights, no duplicates.
    pub(crate) fn from_sorted_edges<I>(dim: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, f64)> + Clone,
    {
        let mut counts = vec![0usize; dim + 1];
        for (u, v, _) in edges.clone() {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..dim {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let nnz = offsets[dim];
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0usize; nnz];
        let mut weights = vec![0.0; nnz];
        for (u, v, w) in edges {
            neighbors[cursor[u]] = v;
            weights[cursor[u]] = w;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            weights[cursor[v]] = w;
            cursor[v] += 1;
        }
        for i in 0..dim {
            let range = offsets[i]..offsets[i + 1];
            let mut row: Vec<(usize, f64)> = neighbors[range.clone()]
                .iter()
                .copied()
                .zip(weights[range.clone()].iter().copied())
                .collect();
            row.sort_by_key(|&(j, _)| j);
            for (slot, (j, w)) in range.zip(row) {
                neighbors[slot] = j;
                weights[slot] = w;
            }
        }
        let degrees = (0..dim)
            .map(|i| weights[offsets[i]..offsets[i + 1]].iter().sum())
            .collect();
        Self {
            dim,
            offsets,
            neighbors,
            weights,
            degrees,
        }
    }

    /// Reads the off-diagonal part of a dense symmetric matrix as a
    /// Laplacian. Entries with `-m_ij <= drop_tol` are discarded; the
    /// diagonal is ignored and re-derived from the kept weights.
    pub fn from_dense_offdiagonal(m: &DMatrix<f64>, drop_tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                actual: m.ncols(),
            });
        }
        let n = m.nrows();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = -0.5 * (m[(i, j)] + m[(j, i)]);
                if w > drop_tol {
                    edges.push((i, j, w));
                }
            }
        }
        Ok(Self::from_sorted_edges(n, edges))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of undirected edges.
    pub fn n_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn max_degree(&self) -> f64 {
        self.degrees.iter().copied().fold(0.0, f64::max)
    }

    /// Neighbors of `i` in increasing index order, with edge weights.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn neighbor_count(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Weight of edge `{i, j}`, or zero when absent.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let range = self.offsets[i]..self.offsets[i + 1];
        match self.neighbors[range.clone()].binary_search(&j) {
            Ok(pos) => self.weights[range.start + pos],
            Err(_) => 0.0,
        }
    }

    /// Matrix entry `L(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.degrees[i]
        } else {
            -self.weight(i, j)
        }
    }

    /// Undirected edges `(u, v, w)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j > i)
                .map(move |(j, w)| (i, j, w))
        })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for i in 0..self.dim {
            let xi = x[i];
            y[i] = self.neighbors(i).map(|(j, w)| w * (xi - x[j])).sum();
        }
    }

    /// `L X` for a dense block of column vectors.
    pub fn apply_matrix(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.dim);
        let mut y = DMatrix::zeros(self.dim, x.ncols());
        for c in 0..x.ncols() {
            let col = x.column(c);
            for i in 0..self.dim {
                let xi = col[i];
                y[(i, c)] = self.neighbors(i).map(|(j, w)| w * (xi - col[j])).sum();
            }
        }
        y
    }

    /// `x^T L x = sum over edges of w_ij (x_i - x_j)^2`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        self.edges()
            .map(|(i, j, w)| {
                let d = x[i] - x[j];
                w * d * d
            })
            .sum()
    }

    /// `X^T L X` for a dense block, accumulated edge-wise (always PSD up to
    /// rounding).
    pub fn gram(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.dim);
        let k = x.ncols();
        let mut g = DMatrix::zeros(k, k);
        let mut diff = vec![0.0; k];
        for (i, j, w) in self.edges() {
            for (c, d) in diff.iter_mut().enumerate() {
                *d = x[(i, c)] - x[(j, c)];
            }
            for a in 0..k {
                let wa = w * diff[a];
                if wa == 0.0 {
                    continue;
                }
                for b in a..k {
                    g[(a, b)] += wa * diff[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                g[(a, b)] = g[(b, a)];
            }
        }
        g
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            m[(i, i)] = self.degrees[i];
            for (j, w) in self.neighbors(i) {
                m[(i, j)] = -w;
            }
        }
        m
    }

    /// Dense normalized Laplacian `D^{-1/2} L D^{-1/2}`; isolated vertices
    /// get an all-zero row and column.
    pub fn to_dense_normalized(&self) -> DMatrix<f64> {
        let scale: Vec<f64> = self
            .degrees
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
            .collect();
        let mut m = self.to_dense();
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] *= scale[i] * scale[j];
            }
        }
        m
    }

    pub fn to_graph(&self) -> WeightedGraph {
        WeightedGraph::new(self.dim, self.edges()).expect("Laplacian edges form a valid graph")
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        components(self.dim, self.edges().map(|(i, j, _)| (i, j)))
    }

    pub fn is_connected(&self) -> bool {
        self.dim <= 1 || self.connected_components().len() == 1
    }

    /// Errors with [`Error::Disconnected`] unless the graph is connected.
    pub fn require_connected(&self) -> Result<()> {
        if self.dim <= 1 {
            return Ok(());
        }
        let n = self.connected_components().len();
        if n == 1 {
            Ok(())
        } else {
            Err(Error::Disconnected { components: n })
        }
    }
}
