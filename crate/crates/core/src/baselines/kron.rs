use crate::coarsening::KronMap;
use crate::error::Result;
use crate::graph::Laplacian;
use crate::spectral::largest_eigenpair;

/// Schur complement of `l` onto `keep`.
pub fn kron_reduce(l: &Laplacian, keep: &[usize]) -> Result<Laplacian> {
    Ok(KronMap::reduce(l, keep)?.1)
}

/// Vertices kept by one Kron level: the positive entries of the eigenvector
/// of the largest eigenvalue, signed so that the positive side is the larger
/// one. Zeros fall on the dropped side; if no entry is positive the upper
/// half by value is kept. The set is extended (by decreasing entry) to at
/// least `n_min` vertices.
pub fn kron_keep_set(l: &Laplacian, n_min: usize) -> Result<Vec<usize>> {
    let n = l.dim();
    let (_, mut u) = largest_eigenpair(l)?;
    let pos = u.iter().filter(|&&v| v > 0.0).count();
    let neg = u.iter().filter(|&&v| v < 0.0).count();
    if neg > pos {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    let positive = pos.max(neg);
    let m = if positive == 0 || positive == n {
        n.div_ceil(2)
    } else {
        positive
    };
    let m = m.max(n_min).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| u[b].total_cmp(&u[a]).then(a.cmp(&b)));
    let mut keep = order[..m].to_vec();
    keep.sort_unstable();
    Ok(keep)
}

/// One halving Kron level: keep set and reduced Laplacian.
pub fn kron_level(l: &Laplacian) -> Result<(Vec<usize>, Laplacian)> {
    let keep = kron_keep_set(l, 1)?;
    let reduced = kron_reduce(l, &keep)?;
    Ok((keep, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn single_edge_keeps_one_vertex() {
        let l = WeightedGraph::path(2).laplacian();
        let (keep, lk) = kron_level(&l).unwrap();
        assert_eq!(keep.len(), 1);
        assert_eq!(lk.dim(), 1);
        assert_eq!(lk.n_edges(), 0);
    }

    #[test]
    fn triangle_effective_weight() {
        let l = WeightedGraph::complete(3).laplacian();
        let lk = kron_reduce(&l, &[0, 1]).unwrap();
        assert!((lk.weight(0, 1) - 1.5).abs() < 1e-14);
        assert_eq!(kron_reduce(&l, &[0, 1, 2]).unwrap(), l);
    }

    #[test]
    fn complete_graph_level_is_a_laplacian() {
        let l = WeightedGraph::complete(4).laplacian();
        let (keep, lk) = kron_level(&l).unwrap();
        assert!(!keep.is_empty() && keep.len() < 4);
        for i in 0..lk.dim() {
            let row: f64 = (0..lk.dim()).map(|j| lk.entry(i, j)).sum();
            assert!(row.abs() < 1e-12);
        }
    }
}
