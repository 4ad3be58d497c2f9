use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::linalg::{max_eigenvalue, psd_sqrt};

/// Local Laplacian `L_C`: edges inside `set` keep their weight, edges
/// leaving it are doubled, all other edges are dropped.
pub fn local_laplacian(l: &Laplacian, set: &[usize]) -> Result<Laplacian> {
    let members = sorted_members(l.dim(), set)?;
    let mut edges = Vec::new();
    for &i in &members {
        for (j, w) in l.neighbors(i) {
            if members.binary_search(&j).is_ok() {
                if i < j {
                    edges.push((i, j, w));
                }
            } else {
                edges.push((i.min(j), i.max(j), 2.0 * w));
            }
        }
    }
    edges.sort_by_key(|a| (a.0, a.1));
    Ok(Laplacian::from_sorted_edges(l.dim(), edges))
}

/// `Pi_C^perp x`: `x(i) - mean_C(x)` on `C`, zero elsewhere.
pub fn local_projection_complement(set: &[usize], x: &[f64]) -> Result<Vec<f64>> {
    let members = sorted_members(x.len(), set)?;
    let mean = members.iter().map(|&i| x[i]).sum::<f64>() / members.len() as f64;
    let mut out = vec![0.0; x.len()];
    for &i in &members {
        out[i] = x[i] - mean;
    }
    Ok(out)
}

fn sorted_members(n: usize, set: &[usize]) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("empty vertex set".into()));
    }
    let mut members = set.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.len() != set.len() {
        return Err(Error::InvalidArgument(
            "vertex set has repeated members".into(),
        ));
    }
    if let Some(&bad) = members.last().filter(|&&v| v >= n) {
        return Err(Error::InvalidArgument(format!(
            "vertex {bad} outside [0, {n})"
        )));
    }
    Ok(members)
}

/// Local variation cost `||Pi_C^perp A||_{L_C}^2 / (|C| - 1)`.
///
/// Only the rows of `C` matter. The restriction of `L_C` to `C` is the
/// internal Laplacian plus the doubled boundary weight on the diagonal,
/// i.e. `deg_i + boundary_i`. The squared norm is the largest eigenvalue of
/// the `k x k` Gram `Y^T L_CC Y` (with `Y` the centred rows of `A`) or,
/// when `k` exceeds `|C|`, of the `|C| x |C|` matrix
/// `L_CC^{1/2} Y Y^T L_CC^{1/2}`. Pairs use the closed form
/// `||a_i - a_j||^2 (deg_i + deg_j) / 2`.
pub fn local_variation_cost(l: &Laplacian, set: &[usize], a: &DMatrix<f64>) -> Result<f64> {
    if a.nrows() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            actual: a.nrows(),
        });
    }
    let members = sorted_members(l.dim(), set)?;
    if members.len() < 2 {
        return Err(Error::InvalidArgument(
            "local variation cost needs at least two vertices".into(),
        ));
    }
    Ok(cost_unchecked(l, &members, a))
}

/// `members` sorted, distinct, in range, at least two.
pub(crate) fn cost_unchecked(l: &Laplacian, members: &[usize], a: &DMatrix<f64>) -> f64 {
    let k = a.ncols();
    let delta = members.len();
    if delta == 2 {
        let (i, j) = (members[0], members[1]);
        let d2: f64 = (0..k).map(|c| (a[(i, c)] - a[(j, c)]).powi(2)).sum();
        return d2 * (l.degree(i) + l.degree(j)) / 2.0;
    }
    let mut y = DMatrix::zeros(delta, k);
    for c in 0..k {
        let mean = members.iter().map(|&i| a[(i, c)]).sum::<f64>() / delta as f64;
        for (p, &i) in members.iter().enumerate() {
            y[(p, c)] = a[(i, c)] - mean;
        }
    }
    let mut lcc = DMatrix::zeros(delta, delta);
    for (p, &i) in members.iter().enumerate() {
        let mut internal = 0.0;
        for (j, w) in l.neighbors(i) {
            if let Ok(q) = members.binary_search(&j) {
                lcc[(p, q)] = -w;
                internal += w;
            }
        }
        lcc[(p, p)] = 2.0 * l.degree(i) - internal;
    }
    let norm_sq = if k <= delta {
        max_eigenvalue(&(y.transpose() * &lcc * &y))
    } else {
        let r = psd_sqrt(&lcc);
        max_eigenvalue(&(&r * &y * y.transpose() * &r))
    };
    norm_sq.max(0.0) / (delta - 1) as f64
}
