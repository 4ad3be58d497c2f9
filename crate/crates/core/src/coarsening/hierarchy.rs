use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::kron::KronMap;
use super::partition::{coarsen_laplacian, Partition};
use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::linalg::require_dense;

/// How one level maps fine vertices to coarse ones.
#[derive(Clone, Debug, PartialEq)]
pub enum LevelMap {
    /// Laplacian consistent contraction.
    Contraction(Partition),
    /// Kron reduction (vertex elimination); not a consistent coarsening.
    Kron(KronMap),
}

impl LevelMap {
    pub fn n_fine(&self) -> usize {
        match self {
            LevelMap::Contraction(p) => p.n_fine(),
            LevelMap::Kron(k) => k.n_fine(),
        }
    }

    pub fn n_coarse(&self) -> usize {
        match self {
            LevelMap::Contraction(p) => p.n_coarse(),
            LevelMap::Kron(k) => k.n_coarse(),
        }
    }

    pub fn partition(&self) -> Option<&Partition> {
        match self {
            LevelMap::Contraction(p) => Some(p),
            LevelMap::Kron(_) => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, LevelMap::Contraction(_))
    }

    pub fn project_matrix(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match self {
            LevelMap::Contraction(p) => p.project_matrix(x),
            LevelMap::Kron(k) => {
                check_rows(k.n_fine(), x)?;
                Ok(k.restrict_matrix(x))
            }
        }
    }

    pub fn lift_matrix(&self, xc: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match self {
            LevelMap::Contraction(p) => p.lift_matrix(xc),
            LevelMap::Kron(k) => {
                check_rows(k.n_coarse(), xc)?;
                Ok(k.extend_matrix(xc))
            }
        }
    }
}

fn check_rows(expected: usize, x: &DMatrix<f64>) -> Result<()> {
    if x.nrows() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            actual: x.nrows(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyLevel {
    pub map: LevelMap,
    /// Laplacian of the coarse graph produced by this level.
    pub laplacian: Laplacian,
    /// Variation cost of the level; `None` for methods without one.
    pub sigma: Option<f64>,
    pub method: String,
}

/// Exact interlacing constants of a consistent hierarchy: the extreme
/// eigenvalues of `(P P^T)^{-1}` for the composed coarsening matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gammas {
    pub gamma1: f64,
    pub gamma2: f64,
}

/// A sequence of coarsening levels over a base Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct Hierarchy {
    base: Laplacian,
    levels: Vec<HierarchyLevel>,
    eps_bound: Option<f64>,
    stalled: bool,
    target: Option<usize>,
    meta: BTreeMap<String, String>,
}

impl Hierarchy {
    pub fn new(base: Laplacian) -> Self {
        Self {
            base,
            levels: Vec::new(),
            eps_bound: Some(0.0),
            stalled: false,
            target: None,
            meta: BTreeMap::new(),
        }
    }

    pub fn base(&self) -> &Laplacian {
        &self.base
    }

    pub fn levels(&self) -> &[HierarchyLevel] {
        &self.levels
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn n_fine(&self) -> usize {
        self.base.dim()
    }

    pub fn n_coarse(&self) -> usize {
        self.coarsest().dim()
    }

    /// `N_0, N_1, ..., N_c`.
    pub fn sizes(&self) -> Vec<usize> {
        std::iter::once(self.n_fine())
            .chain(self.levels.iter().map(|l| l.laplacian.dim()))
            .collect()
    }

    /// Laplacian of the coarsest graph (the base if there are no levels).
    pub fn coarsest(&self) -> &Laplacian {
        self.levels.last().map_or(&self.base, |l| &l.laplacian)
    }

    /// `prod(1 + sigma_l) - 1`, or `None` once a level without a variation
    /// cost has been added.
    pub fn eps_bound(&self) -> Option<f64> {
        self.eps_bound
    }

    /// Whether coarsening stopped because a level made no progress.
    pub fn stalled(&self) -> bool {
        self.stalled
    }

    pub fn set_stalled(&mut self, stalled: bool) {
        self.stalled = stalled;
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    pub fn set_target(&mut self, target: Option<usize>) {
        self.target = target;
    }

    /// Coarse vertices left above the target size.
    pub fn shortfall(&self) -> usize {
        self.target.map_or(0, |t| self.n_coarse().saturating_sub(t))
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.meta.insert(key.into(), value.into());
    }

    /// True when every level is a Laplacian consistent contraction.
    pub fn is_consistent(&self) -> bool {
        self.levels.iter().all(|l| l.map.is_consistent())
    }

    /// Appends a contraction level; the coarse Laplacian is assembled from
    /// cut weights. The partition must reduce the vertex count.
    pub fn push_level(
        &mut self,
        partition: Partition,
        sigma: Option<f64>,
        method: impl Into<String>,
    ) -> Result<()> {
        let lc = coarsen_laplacian(self.coarsest(), &partition)?;
        self.push_checked(LevelMap::Contraction(partition), lc, sigma, method.into())
    }

    /// Appends a Kron reduction level keeping the vertices in `keep`.
    pub fn push_kron_level(&mut self, keep: &[usize], method: impl Into<String>) -> Result<()> {
        let (map, lc) = KronMap::reduce(self.coarsest(), keep)?;
        self.push_checked(LevelMap::Kron(map), lc, None, method.into())
    }

    fn push_checked(
        &mut self,
        map: LevelMap,
        laplacian: Laplacian,
        sigma: Option<f64>,
        method: String,
    ) -> Result<()> {
        let n = self.n_coarse();
        if map.n_coarse() >= n {
            return Err(Error::InvalidPartition(format!(
                "level maps {n} vertices onto {}; levels must shrink the graph",
                map.n_coarse()
            )));
        }
        if let Some(s) = sigma {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "variation cost {s} is not a finite non-negative number"
                )));
            }
        }
        self.eps_bound = match (self.eps_bound, sigma) {
            (Some(eps), Some(s)) => Some((1.0 + eps) * (1.0 + s) - 1.0),
            _ => None,
        };
        self.levels.push(HierarchyLevel {
            map,
            laplacian,
            sigma,
            method,
        });
        Ok(())
    }

    /// Composed reduction `P x = P_c ... P_1 x`.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let m = self.project_matrix(&DMatrix::from_column_slice(x.len(), 1, x))?;
        Ok(m.as_slice().to_vec())
    }

    /// Composed lift `P+ x_c = P_1+ ... P_c+ x_c`.
    pub fn lift(&self, xc: &[f64]) -> Result<Vec<f64>> {
        let m = self.lift_matrix(&DMatrix::from_column_slice(xc.len(), 1, xc))?;
        Ok(m.as_slice().to_vec())
    }

    pub fn project_matrix(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        check_rows(self.n_fine(), x)?;
        let mut cur = x.clone();
        for level in &self.levels {
            cur = level.map.project_matrix(&cur)?;
        }
        Ok(cur)
    }

    pub fn lift_matrix(&self, xc: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        check_rows(self.n_coarse(), xc)?;
        let mut cur = xc.clone();
        for level in self.levels.iter().rev() {
            cur = level.map.lift_matrix(&cur)?;
        }
        Ok(cur)
    }

    /// `Pi x = P+ P x`.
    pub fn apply_pi(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.lift(&self.project(x)?)
    }

    /// `(I - Pi) X` for a block of vectors.
    pub fn apply_pi_complement_matrix(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let pix = self.lift_matrix(&self.project_matrix(x)?)?;
        Ok(x - pix)
    }

    /// Dense composed `P` (`n x N`); size-guarded.
    pub fn dense_p(&self) -> Result<DMatrix<f64>> {
        require_dense(self.n_fine())?;
        self.project_matrix(&DMatrix::identity(self.n_fine(), self.n_fine()))
    }

    /// Dense composed `P+` (`N x n`); size-guarded.
    pub fn dense_p_pinv(&self) -> Result<DMatrix<f64>> {
        require_dense(self.n_fine())?;
        self.lift_matrix(&DMatrix::identity(self.n_coarse(), self.n_coarse()))
    }

    /// Composed fine-to-coarsest assignment of a consistent hierarchy.
    pub fn composed_partition(&self) -> Result<Partition> {
        let mut assignment: Vec<usize> = (0..self.n_fine()).collect();
        for level in &self.levels {
            let p = level.map.partition().ok_or(Error::NotConsistent)?;
            assignment.iter_mut().for_each(|r| *r = p.coarse_of(*r));
        }
        Partition::from_assignment(assignment)
    }

    /// Squared row norms `||P(q,:)||^2` of the composed coarsening matrix.
    /// Rows have disjoint supports, so `P P^T` is diagonal with these
    /// entries.
    pub fn composed_row_norms_sq(&self) -> Result<Vec<f64>> {
        let mut norms = vec![1.0; self.n_fine()];
        for level in &self.levels {
            let p = level.map.partition().ok_or(Error::NotConsistent)?;
            norms = p
                .sets()
                .iter()
                .map(|s| {
                    let m = s.len() as f64;
                    s.iter().map(|&i| norms[i]).sum::<f64>() / (m * m)
                })
                .collect();
        }
        Ok(norms)
    }

    /// Exact `gamma1 = lambda_min((P P^T)^{-1})` and
    /// `gamma2 = lambda_max((P P^T)^{-1})`.
    pub fn interlacing_gammas(&self) -> Result<Gammas> {
        let norms = self.composed_row_norms_sq()?;
        let (lo, hi) = norms.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        Ok(Gammas {
            gamma1: 1.0 / hi,
            gamma2: 1.0 / lo,
        })
    }

    /// Bounds on the gammas from products of nested set sizes:
    /// `gamma1 >= min_i prod_l |set_l(i)|` and `gamma2 <= max_i prod_l |set_l(i)|`.
    pub fn set_size_gamma_bounds(&self) -> Result<Gammas> {
        let mut prod = vec![1.0; self.n_fine()];
        let mut assignment: Vec<usize> = (0..self.n_fine()).collect();
        for level in &self.levels {
            let p = level.map.partition().ok_or(Error::NotConsistent)?;
            let sizes = p.set_sizes();
            for (i, r) in assignment.iter_mut().enumerate() {
                *r = p.coarse_of(*r);
                prod[i] *= sizes[*r] as f64;
            }
        }
        let (lo, hi) = prod.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        Ok(Gammas {
            gamma1: if prod.is_empty() { 1.0 } else { lo },
            gamma2: if prod.is_empty() { 1.0 } else { hi },
        })
    }

    /// `(x_c^T L_c x_c, x_lift^T L x_lift)` with `x_c = P x` and
    /// `x_lift = P+ x_c`; the two agree for any reduction of this scheme.
    pub fn quadratic_form_preservation_check(&self, x: &[f64]) -> Result<(f64, f64)> {
        let xc = self.project(x)?;
        let lifted = self.lift(&xc)?;
        Ok((
            self.coarsest().quadratic_form(&xc),
            self.base.quadratic_form(&lifted),
        ))
    }

    /// The coarse Laplacians recomputed from the level maps must match the
    /// stored ones; used after deserialization and in tests.
    pub fn verify_levels(&self, tol: f64) -> Result<()> {
        let mut prev = &self.base;
        for (idx, level) in self.levels.iter().enumerate() {
            let recomputed = match &level.map {
                LevelMap::Contraction(p) => coarsen_laplacian(prev, p)?,
                LevelMap::Kron(k) => KronMap::reduce(prev, k.keep())?.1,
            };
            let diff = laplacian_distance(&recomputed, &level.laplacian);
            if diff > tol {
                return Err(Error::CorruptHierarchy(format!(
                    "level {idx}: coarse Laplacian differs by {diff:e}"
                )));
            }
            prev = &level.laplacian;
        }
        Ok(())
    }
}

/// Max-entry distance between two Laplacians of equal size (infinite if
/// sizes differ).
fn laplacian_distance(a: &Laplacian, b: &Laplacian) -> f64 {
    if a.dim() != b.dim() {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    for i in 0..a.dim() {
        worst = worst.max((a.degree(i) - b.degree(i)).abs());
        for (j, w) in a.neighbors(i) {
            worst = worst.max((w - b.weight(i, j)).abs());
        }
        for (j, w) in b.neighbors(i) {
            worst = worst.max((w - a.weight(i, j)).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    fn two_level_p4() -> Hierarchy {
        let mut h = Hierarchy::new(WeightedGraph::path(4).laplacian());
        h.push_level(
            Partition::new(4, vec![vec![0, 1], vec![2], vec![3]]).unwrap(),
            Some(0.1),
            "test",
        )
        .unwrap();
        h.push_level(
            Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap(),
            Some(0.2),
            "test",
        )
        .unwrap();
        h
    }

    #[test]
    fn composed_maps_and_eps() {
        let h = two_level_p4();
        assert_eq!(h.sizes(), vec![4, 3, 2]);
        assert_eq!(h.project(&[1.0, 3.0, 4.0, 6.0]).unwrap(), vec![2.0, 5.0]);
        assert_eq!(h.lift(&[1.0, 2.0]).unwrap(), vec![1.0, 1.0, 2.0, 2.0]);
        assert!((h.eps_bound().unwrap() - (1.1 * 1.2 - 1.0)).abs() < 1e-15);
        let g = h.interlacing_gammas().unwrap();
        // rows: (1/2, 1/2, 0, 0) and (0, 0, 1/2, 1/2)
        assert_eq!((g.gamma1, g.gamma2), (2.0, 2.0));
    }

    #[test]
    fn rejects_non_shrinking_levels() {
        let mut h = Hierarchy::new(WeightedGraph::path(3).laplacian());
        assert!(h
            .push_level(Partition::identity(3), Some(0.0), "x")
            .is_err());
        assert!(h
            .push_level(Partition::identity(2), Some(0.0), "x")
            .is_err());
    }

    #[test]
    fn kron_level_breaks_consistency_and_eps() {
        let mut h = Hierarchy::new(WeightedGraph::path(3).laplacian());
        h.push_kron_level(&[0, 2], "kron").unwrap();
        assert!(!h.is_consistent());
        assert_eq!(h.eps_bound(), None);
        assert!(matches!(h.interlacing_gammas(), Err(Error::NotConsistent)));
        let (a, b) = h
            .quadratic_form_preservation_check(&[1.0, -2.0, 0.5])
            .unwrap();
        assert!((a - b).abs() < 1e-12);
        h.verify_levels(1e-12).unwrap();
    }
}
