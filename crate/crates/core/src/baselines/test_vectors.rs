use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Laplacian;

/// Damping of the Jacobi smoother.
pub const JACOBI_OMEGA: f64 = 2.0 / 3.0;
/// Relaxation sweeps used for algebraic distances.
pub const JACOBI_SWEEPS: usize = 20;

fn random_start(n: usize, q: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = DMatrix::zeros(n, q);
    for c in 0..q {
        for i in 0..n {
            x[(i, c)] = rng.gen_range(-1.0..=1.0);
        }
    }
    x
}

fn require_positive_degrees(l: &Laplacian) -> Result<()> {
    match (0..l.dim()).find(|&i| l.degree(i) <= 0.0) {
        Some(i) => Err(Error::InvalidGraph(format!(
            "vertex {i} has zero degree; relaxation is undefined"
        ))),
        None => Ok(()),
    }
}

fn normalize_columns(x: &mut DMatrix<f64>) {
    for mut col in x.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= n;
        }
    }
}

/// `q` seeded uniform `[-1, 1]` vectors smoothed by `sweeps` damped Jacobi
/// iterations `x <- x - omega D^{-1} L x` on `L x = 0`, each followed by
/// rescaling to unit norm.
pub fn jacobi_test_vectors(
    l: &Laplacian,
    q: usize,
    sweeps: usize,
    seed: u64,
) -> Result<DMatrix<f64>> {
    require_positive_degrees(l)?;
    let n = l.dim();
    let mut x = random_start(n, q, seed);
    let mut col = vec![0.0; n];
    let mut lx = vec![0.0; n];
    for _ in 0..sweeps {
        for c in 0..q {
            col.copy_from_slice(x.column(c).as_slice());
            l.apply_into(&col, &mut lx);
            for i in 0..n {
                x[(i, c)] = col[i] - JACOBI_OMEGA * lx[i] / l.degree(i);
            }
        }
        normalize_columns(&mut x);
    }
    Ok(x)
}

/// `q` seeded uniform `[-1, 1]` vectors after `sweeps` in-place
/// Gauss-Seidel sweeps (vertices in index order) on `L x = 0`, rescaled to
/// unit norm.
pub fn gauss_seidel_test_vectors(
    l: &Laplacian,
    q: usize,
    sweeps: usize,
    seed: u64,
) -> Result<DMatrix<f64>> {
    require_positive_degrees(l)?;
    let n = l.dim();
    let mut x = random_start(n, q, seed);
    for _ in 0..sweeps {
        for c in 0..q {
            for i in 0..n {
                let s: f64 = l.neighbors(i).map(|(j, w)| w * x[(j, c)]).sum();
                x[(i, c)] = s / l.degree(i);
            }
        }
        normalize_columns(&mut x);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn zero_sweeps_return_the_seeded_start() {
        let l = WeightedGraph::path(5).laplacian();
        let x = jacobi_test_vectors(&l, 2, 0, 3).unwrap();
        assert_eq!(x, random_start(5, 2, 3));
        assert!(x.iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn path3_jacobi_recurrence() {
        let l = WeightedGraph::path(3).laplacian();
        let x0 = random_start(3, 1, 11);
        let (a, b, c) = (x0[(0, 0)], x0[(1, 0)], x0[(2, 0)]);
        let w = 2.0 / 3.0;
        let y = [
            a - w * (a - b),
            b - w * (2.0 * b - a - c) / 2.0,
            c - w * (c - b),
        ];
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let x = jacobi_test_vectors(&l, 1, 1, 11).unwrap();
        for i in 0..3 {
            assert!((x[(i, 0)] - y[i] / norm).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_vector_is_a_fixed_point() {
        let l = WeightedGraph::cycle(6).laplacian();
        let ones = vec![1.0; 6];
        let mut lx = vec![0.0; 6];
        l.apply_into(&ones, &mut lx);
        assert!(lx.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn isolated_vertex_is_rejected() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        assert!(jacobi_test_vectors(&g.laplacian(), 1, 1, 0).is_err());
        assert!(gauss_seidel_test_vectors(&g.laplacian(), 1, 1, 0).is_err());
    }
}
