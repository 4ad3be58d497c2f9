//! Slow, literal reference implementations for cross-checking the
//! production code in tests. Everything here is dense and exhaustive, and
//! nothing reuses production code paths.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

/// Largest matrix dimension any dense oracle accepts.
pub const DENSE_LIMIT: usize = 2000;
/// Largest vertex count for subset enumeration.
pub const CUT_ENUM_LIMIT: usize = 16;
/// Largest point count for set-partition enumeration.
pub const PARTITION_ENUM_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooLarge { size: usize, limit: usize },
    Overlap(usize),
    InvalidInput(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { size, limit } => {
                write!(f, "oracle input of size {size} exceeds limit {limit}")
            }
            OracleError::Overlap(v) => write!(f, "vertex {v} is in both sets"),
            OracleError::InvalidInput(m) => write!(f, "invalid oracle input: {m}"),
        }
    }
}

impl std::error::Error for OracleError {}

pub type OracleResult<T> = Result<T, OracleError>;

fn guard(size: usize, limit: usize) -> OracleResult<()> {
    if size > limit {
        Err(OracleError::TooLarge { size, limit })
    } else {
        Ok(())
    }
}

/// `D - W` from an undirected edge list; repeated pairs accumulate.
pub fn dense_laplacian(n: usize, edges: &[(usize, usize, f64)]) -> OracleResult<DMatrix<f64>> {
    guard(n, DENSE_LIMIT)?;
    let mut l = DMatrix::zeros(n, n);
    for &(i, j, w) in edges {
        l[(i, j)] -= w;
        l[(j, i)] -= w;
        l[(i, i)] += w;
        l[(j, j)] += w;
    }
    Ok(l)
}

/// Consistent coarsening matrix: `P(r, i) = 1/|set_r|` for `i` in set `r`.
pub fn consistent_p(n: usize, sets: &[Vec<usize>]) -> OracleResult<DMatrix<f64>> {
    guard(n, DENSE_LIMIT)?;
    let mut p = DMatrix::zeros(sets.len(), n);
    for (r, s) in sets.iter().enumerate() {
        for &i in s {
            p[(r, i)] = 1.0 / s.len() as f64;
        }
    }
    Ok(p)
}

/// Moore-Penrose pseudo-inverse from the identity `M+ = M^T (M M^T)+`,
/// with the Gram pseudo-inverse taken from a symmetric eigendecomposition
/// (nalgebra's SVD loses accuracy on these matrices).
pub fn pinv(m: &DMatrix<f64>) -> OracleResult<DMatrix<f64>> {
    guard(m.nrows().max(m.ncols()), DENSE_LIMIT)?;
    let gram = m * m.transpose();
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let tol = 1e-12 * top.max(f64::MIN_POSITIVE);
    let inv = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| if v > tol { 1.0 / v } else { 0.0 }));
    let gram_pinv = &eig.eigenvectors * inv * eig.eigenvectors.transpose();
    Ok(m.transpose() * gram_pinv)
}

/// `P^{+T} L P^+` evaluated literally.
pub fn dense_reduce(l: &DMatrix<f64>, p: &DMatrix<f64>) -> OracleResult<DMatrix<f64>> {
    let pp = pinv(p)?;
    Ok(pp.transpose() * l * &pp)
}

/// Eigenvalues ascending with matching eigenvector columns.
pub fn sorted_eigen(m: &DMatrix<f64>) -> OracleResult<(Vec<f64>, DMatrix<f64>)> {
    guard(m.nrows(), DENSE_LIMIT)?;
    let eig = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..m.nrows()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), m.nrows(), |r, c| eig.eigenvectors[(r, idx[c])]);
    Ok((vals, vecs))
}

pub fn eigenvalues(m: &DMatrix<f64>) -> OracleResult<Vec<f64>> {
    Ok(sorted_eigen(m)?.0)
}

fn lambda_max(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Sum of edge weights between disjoint vertex sets `a` and `b`.
pub fn brute_force_cut_weight(
    edges: &[(usize, usize, f64)],
    a: &[usize],
    b: &[usize],
) -> OracleResult<f64> {
    if let Some(&v) = a.iter().find(|v| b.contains(v)) {
        return Err(OracleError::Overlap(v));
    }
    Ok(edges
        .iter()
        .filter(|&&(i, j, _)| {
            (a.contains(&i) && b.contains(&j)) || (a.contains(&j) && b.contains(&i))
        })
        .map(|&(_, _, w)| w)
        .sum())
}

/// `min_S w(S, S^c) / min(vol S, vol S^c)` over all non-trivial `S`.
/// Subsets with an empty-volume side are skipped.
pub fn brute_force_conductance_k2(n: usize, edges: &[(usize, usize, f64)]) -> OracleResult<f64> {
    guard(n, CUT_ENUM_LIMIT)?;
    if n < 2 {
        return Err(OracleError::InvalidInput(
            "need at least two vertices".into(),
        ));
    }
    let mut deg = vec![0.0; n];
    for &(i, j, w) in edges {
        deg[i] += w;
        deg[j] += w;
    }
    let mut best = f64::INFINITY;
    // vertex n-1 is fixed outside S so each cut is visited once
    for mask in 1u32..(1u32 << (n - 1)) {
        let inside = |v: usize| mask >> v & 1 == 1;
        let vol_s: f64 = (0..n).filter(|&v| inside(v)).map(|v| deg[v]).sum();
        let vol_c: f64 = (0..n).filter(|&v| !inside(v)).map(|v| deg[v]).sum();
        let cut: f64 = edges
            .iter()
            .filter(|&&(i, j, _)| inside(i) != inside(j))
            .map(|&(_, _, w)| w)
            .sum();
        let denom = vol_s.min(vol_c);
        if denom > 0.0 {
            best = best.min(cut / denom);
        }
    }
    Ok(best)
}

/// `sum_z sum_{i,j in S_z} ||x_i - x_j||^2 / (2 |S_z|)` by the pairwise
/// definition.
pub fn kmeans_cost(points: &DMatrix<f64>, labels: &[usize]) -> f64 {
    let n_clusters = labels.iter().map(|&z| z + 1).max().unwrap_or(0);
    let mut sizes = vec![0usize; n_clusters];
    labels.iter().for_each(|&z| sizes[z] += 1);
    let mut total = 0.0;
    for i in 0..points.nrows() {
        for j in 0..points.nrows() {
            if labels[i] == labels[j] {
                let d = (points.row(i) - points.row(j)).norm_squared();
                total += d / (2.0 * sizes[labels[i]] as f64);
            }
        }
    }
    total
}

/// Optimal `n`-means cost over all partitions of the rows into exactly `n`
/// non-empty clusters.
pub fn brute_force_nmeans(points: &DMatrix<f64>, n: usize) -> OracleResult<f64> {
    let m = points.nrows();
    guard(m, PARTITION_ENUM_LIMIT)?;
    if n == 0 || n > m {
        return Err(OracleError::InvalidInput(format!(
            "cannot split {m} points into {n} clusters"
        )));
    }
    let mut best = f64::INFINITY;
    let mut labels = vec![0usize; m];
    enumerate_partitions(&mut labels, 0, 0, n, &mut |labels| {
        best = best.min(kmeans_cost(points, labels));
    });
    Ok(best)
}

/// Restricted growth strings with exactly `n` blocks.
fn enumerate_partitions(
    labels: &mut Vec<usize>,
    pos: usize,
    used: usize,
    n: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    let m = labels.len();
    if pos == m {
        if used == n {
            visit(labels);
        }
        return;
    }
    if used + (m - pos) < n {
        return;
    }
    for z in 0..=used.min(n - 1) {
        labels[pos] = z;
        let next = if z == used { used + 1 } else { used };
        enumerate_partitions(labels, pos + 1, next, n, visit);
    }
}

/// Local Laplacian of `set`: internal edges at their weight, edges leaving
/// the set doubled, everything else dropped.
pub fn dense_local_laplacian(
    n: usize,
    edges: &[(usize, usize, f64)],
    set: &[usize],
) -> OracleResult<DMatrix<f64>> {
    let local: Vec<(usize, usize, f64)> = edges
        .iter()
        .filter_map(|&(i, j, w)| match (set.contains(&i), set.contains(&j)) {
            (true, true) => Some((i, j, w)),
            (true, false) | (false, true) => Some((i, j, 2.0 * w)),
            (false, false) => None,
        })
        .collect();
    dense_laplacian(n, &local)
}

/// `lambda_max(A^T Pi_C^perp L_C Pi_C^perp A) / (|C| - 1)` with every matrix
/// formed at full size.
pub fn dense_variation_cost(
    n: usize,
    edges: &[(usize, usize, f64)],
    set: &[usize],
    a: &DMatrix<f64>,
) -> OracleResult<f64> {
    if set.len() < 2 {
        return Err(OracleError::InvalidInput("set needs two members".into()));
    }
    let lc = dense_local_laplacian(n, edges, set)?;
    let mut pi = DMatrix::zeros(n, n);
    for &i in set {
        pi[(i, i)] = 1.0;
        for &j in set {
            pi[(i, j)] -= 1.0 / set.len() as f64;
        }
    }
    let m = a.transpose() * &pi * lc * &pi * a;
    Ok(lambda_max(&m) / (set.len() - 1) as f64)
}

/// `U_k Lambda_k^{+1/2}` of a dense Laplacian (zero column for null
/// eigenvalues).
pub fn scaled_eigenbasis(l: &DMatrix<f64>, k: usize) -> OracleResult<(Vec<f64>, DMatrix<f64>)> {
    let (vals, vecs) = sorted_eigen(l)?;
    let tol = 1e-9 * vals.last().copied().unwrap_or(1.0).max(1.0);
    let mut b = vecs.columns(0, k).into_owned();
    for (c, &v) in vals.iter().enumerate().take(k) {
        let s = if v > tol { 1.0 / v.sqrt() } else { 0.0 };
        b.column_mut(c).scale_mut(s);
    }
    Ok((vals, b))
}

/// Restricted approximation constants `eps_1, ..., eps_k` of a reduction
/// with dense `P` (`n x N`) on the leading eigenspaces of `l`:
/// `eps_i = max_{x in span U_i} ||x - P^+ P x||_L / ||x||_L`.
pub fn dense_restricted_epsilons(
    l: &DMatrix<f64>,
    p: &DMatrix<f64>,
    k: usize,
) -> OracleResult<Vec<f64>> {
    let n = l.nrows();
    let (_, b) = scaled_eigenbasis(l, k)?;
    let pi = pinv(p)? * p;
    let z = (DMatrix::identity(n, n) - pi) * b;
    let g = z.transpose() * l * z;
    Ok((1..=k)
        .map(|i| {
            lambda_max(&g.view((0, 0), (i, i)).into_owned())
                .max(0.0)
                .sqrt()
        })
        .collect())
}

/// Schur complement `L_kk - L_kd L_dd^{-1} L_dk`.
pub fn dense_schur(l: &DMatrix<f64>, keep: &[usize]) -> OracleResult<DMatrix<f64>> {
    guard(l.nrows(), DENSE_LIMIT)?;
    let drop: Vec<usize> = (0..l.nrows()).filter(|i| !keep.contains(i)).collect();
    let sub = |r: &[usize], c: &[usize]| DMatrix::from_fn(r.len(), c.len(), |a, b| l[(r[a], c[b])]);
    let l_kk = sub(keep, keep);
    if drop.is_empty() {
        return Ok(l_kk);
    }
    let inv = sub(&drop, &drop)
        .try_inverse()
        .ok_or_else(|| OracleError::InvalidInput("eliminated block is singular".into()))?;
    Ok(&l_kk - sub(keep, &drop) * inv * sub(&drop, keep))
}
