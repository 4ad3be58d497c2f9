//! Extremal eigenpairs of graph Laplacians.
//!
//! Graphs up to [`DENSE_EIGEN_LIMIT`] vertices are solved with a dense symmetric
//! eigendecomposition. Larger graphs use a thick-restart Lanczos iteration
//! with full reorthogonalization. In both cases the nullspace (one indicator
//! vector per connected component) is inserted analytically.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::linalg::{orient, symmetric_eigen};

/// Largest graph solved with a full dense eigendecomposition; above it the
/// iterative solver is cheaper for the handful of pairs requested.
pub const DENSE_EIGEN_LIMIT: usize = 400;

/// Residual tolerance `||L u - lambda u||_2` for unit eigenvectors.
pub const EIGEN_TOL: f64 = 1e-8;

const LANCZOS_SEED: u64 = 0x5eed_1a2c;
const MAX_RESTARTS: usize = 2000;

/// The `k` smallest eigenpairs of a Laplacian, eigenvalues ascending and
/// eigenvectors orthonormal (columns of `vectors`).
#[derive(Clone, Debug)]
pub struct EigenBasis {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
    pub residuals: Vec<f64>,
}

impl EigenBasis {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    /// The leading `k` pairs.
    pub fn truncate(&self, k: usize) -> EigenBasis {
        let k = k.min(self.k());
        EigenBasis {
            values: self.values[..k].to_vec(),
            vectors: self.vectors.columns(0, k).into_owned(),
            residuals: self.residuals[..k].to_vec(),
        }
    }

    /// `U_k Lambda_k^{+1/2}`: each column scaled by `1/sqrt(lambda_i)`, with
    /// nullspace columns (`lambda_i <= null_tol`) set to zero.
    pub fn scaled_by_inverse_sqrt(&self, null_tol: f64) -> DMatrix<f64> {
        let mut out = self.vectors.clone();
        for (c, &lam) in self.values.iter().enumerate() {
            let s = if lam > null_tol {
                1.0 / lam.sqrt()
            } else {
                0.0
            };
            out.column_mut(c).scale_mut(s);
        }
        out
    }
}

/// Threshold below which a Laplacian eigenvalue counts as zero.
pub fn null_tolerance(l: &Laplacian) -> f64 {
    1e-10 * l.max_degree().max(1.0)
}

pub fn smallest_eigenpairs(l: &Laplacian, k: usize) -> Result<EigenBasis> {
    let n = l.dim();
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenpairs of a {n}x{n} Laplacian"
        )));
    }
    let nullspace = nullspace_basis(l);
    let c = nullspace.len();
    let mut values = vec![0.0; k.min(c)];
    let mut vectors: Vec<Vec<f64>> = nullspace.iter().take(k).cloned().collect();
    if k > c {
        let (vals, vecs) = if n <= DENSE_EIGEN_LIMIT {
            let (all_vals, all_vecs) = symmetric_eigen(&l.to_dense());
            let vecs = (c..k)
                .map(|i| all_vecs.column(i).iter().copied().collect())
                .collect();
            (all_vals[c..k].to_vec(), vecs)
        } else {
            lanczos_smallest(n, |x, y| l.apply_into(x, y), k - c, &nullspace)?
        };
        values.extend(vals);
        vectors.extend(vecs);
    }
    let mut mat = DMatrix::zeros(n, k);
    for (c, v) in vectors.iter().enumerate() {
        mat.column_mut(c).copy_from_slice(v);
    }
    let residuals = residuals(l, &values, &mat);
    Ok(EigenBasis {
        values,
        vectors: mat,
        residuals,
    })
}

/// Eigenpair of the largest Laplacian eigenvalue.
pub fn largest_eigenpair(l: &Laplacian) -> Result<(f64, Vec<f64>)> {
    let n = l.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty Laplacian".into()));
    }
    if n <= DENSE_EIGEN_LIMIT {
        let (vals, vecs) = symmetric_eigen(&l.to_dense());
        return Ok((vals[n - 1], vecs.column(n - 1).iter().copied().collect()));
    }
    let (vals, mut vecs) = lanczos_smallest(
        n,
        |x, y| {
            l.apply_into(x, y);
            y.iter_mut().for_each(|v| *v = -*v);
        },
        1,
        &[],
    )?;
    Ok((-vals[0], vecs.remove(0)))
}

/// Orthonormal indicator vectors of the connected components.
fn nullspace_basis(l: &Laplacian) -> Vec<Vec<f64>> {
    let n = l.dim();
    l.connected_components()
        .into_iter()
        .map(|comp| {
            let mut v = vec![0.0; n];
            let s = 1.0 / (comp.len() as f64).sqrt();
            for i in comp {
                v[i] = s;
            }
            v
        })
        .collect()
}

fn residuals(l: &Laplacian, values: &[f64], vectors: &DMatrix<f64>) -> Vec<f64> {
    let lv = l.apply_matrix(vectors);
    values
        .iter()
        .enumerate()
        .map(|(c, &lam)| (lv.column(c) - vectors.column(c) * lam).norm())
        .collect()
}

/// Ratio below which a Gram-Schmidt pass is repeated.
const REORTH_RATIO: f64 = 0.7;

/// The `nev` smallest eigenpairs of a symmetric operator restricted to the
/// orthogonal complement of `deflate` (orthonormal vectors).
///
/// A single-vector Krylov method sees only one direction of each repeated
/// eigenvalue, so after the first solve the search is repeated in the
/// complement of everything found so far until its smallest eigenvalue is not
/// below the current `nev`-th value.
pub(crate) fn lanczos_smallest<F>(
    n: usize,
    apply: F,
    nev: usize,
    deflate: &[Vec<f64>],
) -> Result<(Vec<f64>, Vec<Vec<f64>>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let (mut vals, mut vecs) = lanczos_run(n, &apply, nev, deflate, LANCZOS_SEED)?;
    for round in 1..=(2 * nev) as u64 {
        let space_left = n - deflate.len() - vals.len();
        if space_left == 0 {
            break;
        }
        let mut known = deflate.to_vec();
        known.extend(vecs.iter().cloned());
        let (more_vals, more_vecs) = lanczos_run(n, &apply, 1, &known, LANCZOS_SEED + round)?;
        let top = vals[nev - 1];
        let before = vals.len();
        for (v, x) in more_vals.into_iter().zip(more_vecs) {
            if v < top - EIGEN_TOL {
                vals.push(v);
                vecs.push(x);
            }
        }
        if vals.len() == before {
            break;
        }
        let mut order: Vec<usize> = (0..vals.len()).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        order.truncate(nev);
        vals = order.iter().map(|&i| vals[i]).collect();
        vecs = order.iter().map(|&i| vecs[i].clone()).collect();
    }
    Ok((vals, vecs))
}

/// One thick-restart Lanczos solve with full reorthogonalization. The basis
/// is kept as the columns of one matrix so that reorthogonalization and
/// restarts run as matrix-vector and matrix-matrix products.
fn lanczos_run<F>(
    n: usize,
    apply: &F,
    nev: usize,
    deflate: &[Vec<f64>],
    seed: u64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let space = n - deflate.len();
    if nev == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if nev > space {
        return Err(Error::InvalidArgument(format!(
            "{nev} eigenpairs requested from a space of dimension {space}"
        )));
    }
    let m = (2 * nev + 40).max(60).min(space);
    let keep = (nev + (m - nev) * 3 / 10).min(m - 1).max(nev);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let known = DMatrix::from_fn(n, deflate.len(), |r, c| deflate[c][r]);

    // Gram-Schmidt against the deflated vectors and the first `cols` basis
    // columns; returns the coefficients on the basis columns. The second pass
    // runs only when the first one cancelled most of the vector.
    let orthogonalize = |w: &mut DVector<f64>, q: &DMatrix<f64>, cols: usize| -> DVector<f64> {
        let basis = q.columns(0, cols);
        let mut coeffs = DVector::zeros(cols);
        let initial = w.norm();
        for pass in 0..2 {
            if pass == 1 && w.norm() >= REORTH_RATIO * initial {
                break;
            }
            if known.ncols() > 0 {
                let d = known.tr_mul(w);
                w.gemv(-1.0, &known, &d, 1.0);
            }
            if cols > 0 {
                let c = basis.tr_mul(w);
                w.gemv(-1.0, &basis, &c, 1.0);
                coeffs += c;
            }
        }
        coeffs
    };
    let fresh_vector = |q: &DMatrix<f64>, cols: usize, rng: &mut ChaCha8Rng| {
        for _ in 0..8 {
            let mut v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let initial = v.norm();
            orthogonalize(&mut v, q, cols);
            // Force the second pass for random vectors.
            orthogonalize(&mut v, q, cols);
            let nv = v.norm();
            if nv > 1e-8 * initial {
                return Some(v / nv);
            }
        }
        None
    };

    let mut q = DMatrix::<f64>::zeros(n, m);
    let start = fresh_vector(&q, 0, &mut rng)
        .ok_or_else(|| Error::NoConvergence("could not draw a start vector".into()))?;
    q.set_column(0, &start);
    let mut h = DMatrix::<f64>::zeros(m, m);
    let mut w = DVector::<f64>::zeros(n);
    let mut next_index = 0usize;

    for _ in 0..MAX_RESTARTS {
        let mut beta = 0.0;
        let mut dim = next_index + 1;
        let mut residual: Option<DVector<f64>> = None;
        for i in next_index..m {
            apply(&q.as_slice()[i * n..(i + 1) * n], w.as_mut_slice());
            let coeffs = orthogonalize(&mut w, &q, i + 1);
            for (l, &c) in coeffs.iter().enumerate() {
                h[(l, i)] = c;
                h[(i, l)] = c;
            }
            dim = i + 1;
            beta = w.norm();
            let scale = coeffs[i].abs().max(1.0);
            let live = beta > 1e-12 * scale;
            if i + 1 < m {
                if live {
                    q.set_column(i + 1, &(&w / beta));
                } else {
                    beta = 0.0;
                    match fresh_vector(&q, i + 1, &mut rng) {
                        Some(v) => q.set_column(i + 1, &v),
                        None => break,
                    }
                }
            } else if live {
                residual = Some(&w / beta);
            } else {
                beta = 0.0;
            }
        }
        let (theta, y) = symmetric_eigen(&h.view((0, 0), (dim, dim)).into_owned());
        let converged = (0..nev).all(|j| beta * y[(dim - 1, j)].abs() <= EIGEN_TOL);
        let exhausted = dim == space;
        if converged || exhausted || residual.is_none() {
            if !(converged || exhausted) {
                return Err(Error::NoConvergence(
                    "Krylov space collapsed before convergence".into(),
                ));
            }
            let x = q.columns(0, dim) * y.columns(0, nev);
            let vecs = (0..nev)
                .map(|j| {
                    let mut v = x.column(j).iter().copied().collect::<Vec<f64>>();
                    orient(&mut v);
                    v
                })
                .collect();
            return Ok((theta[..nev].to_vec(), vecs));
        }
        // Restart with the `keep` smallest Ritz vectors plus the residual.
        let ritz = q.columns(0, dim) * y.columns(0, keep);
        q.columns_mut(0, keep).copy_from(&ritz);
        q.set_column(keep, &residual.expect("checked above"));
        h.fill(0.0);
        for j in 0..keep {
            h[(j, j)] = theta[j];
        }
        next_index = keep;
    }
    Err(Error::NoConvergence(format!(
        "no convergence after {MAX_RESTARTS} restarts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn path3_spectrum() {
        let e = smallest_eigenpairs(&WeightedGraph::path(3).laplacian(), 3).unwrap();
        assert_close(&e.values, &[0.0, 1.0, 3.0], 1e-12);
        assert!(e.residuals.iter().all(|&r| r < EIGEN_TOL));
        let c = 1.0 / 3f64.sqrt();
        assert_close(e.vectors.column(0).as_slice(), &[c, c, c], 1e-15);
    }

    #[test]
    fn cycle4_spectrum() {
        let e = smallest_eigenpairs(&WeightedGraph::cycle(4).laplacian(), 4).unwrap();
        assert_close(&e.values, &[0.0, 2.0, 2.0, 4.0], 1e-12);
    }

    #[test]
    fn weighted_single_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 1.75)]).unwrap();
        let e = smallest_eigenpairs(&g.laplacian(), 2).unwrap();
        assert_close(&e.values, &[0.0, 3.5], 1e-12);
    }

    #[test]
    fn disconnected_nullspace_is_inserted() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let e = smallest_eigenpairs(&g.laplacian(), 3).unwrap();
        assert_close(&e.values, &[0.0, 0.0, 2.0], 1e-12);
        let s = 1.0 / 2f64.sqrt();
        assert_close(e.vectors.column(0).as_slice(), &[s, s, 0.0, 0.0], 0.0);
    }

    #[test]
    fn rejects_too_many_pairs() {
        assert!(smallest_eigenpairs(&WeightedGraph::path(3).laplacian(), 4).is_err());
    }

    #[test]
    fn lanczos_matches_dense_on_cycle() {
        // Circulant spectrum 2 - 2 cos(2 pi j / n).
        let n = 300;
        let l = WeightedGraph::cycle(n).laplacian();
        let ones = vec![1.0 / (n as f64).sqrt(); n];
        let (vals, vecs) = lanczos_smallest(n, |x, y| l.apply_into(x, y), 5, &[ones]).unwrap();
        let mut expected: Vec<f64> = (1..n)
            .map(|j| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        assert_close(&vals, &expected[..5], 1e-9);
        for (v, &lam) in vecs.iter().zip(&vals) {
            let lv = l.apply(v);
            let r: f64 = lv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - lam * b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-7, "residual {r}");
        }
    }

    #[test]
    fn lanczos_largest_of_path() {
        let n = 120;
        let l = WeightedGraph::path(n).laplacian();
        let (vals, _) = lanczos_smallest(
            n,
            |x, y| {
                l.apply_into(x, y);
                y.iter_mut().for_each(|v| *v = -*v);
            },
            1,
            &[],
        )
        .unwrap();
        let expected = 2.0 - 2.0 * (std::f64::consts::PI * (n - 1) as f64 / n as f64).cos();
        assert!((-vals[0] - expected).abs() < 1e-9);
    }
}
