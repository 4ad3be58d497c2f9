use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Laplacian;
use crate::linalg::require_dense;

/// Contraction sets of one coarsening level.
///
/// Every fine vertex belongs to exactly one set; singletons are stored
/// explicitly. Coarse vertex `r` is `sets()[r]`. The partition also acts as
/// the Laplacian consistent coarsening matrix `P` (row `r` averages set
/// `r`) and its pseudo-inverse `P+` (copies the coarse value to each
/// member), neither of which is ever materialized unless asked for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    n_fine: usize,
    sets: Vec<Vec<usize>>,
    assignment: Vec<usize>,
}

impl Partition {
    /// Validates that `sets` are non-empty, disjoint and cover `[0, n_fine)`.
    /// Members are stored sorted; set order (coarse numbering) is kept.
    pub fn new(n_fine: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n_fine];
        let mut sets = sets;
        for (r, set) in sets.iter_mut().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidPartition(format!("set {r} is empty")));
            }
            set.sort_unstable();
            for &i in set.iter() {
                if i >= n_fine {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {i} outside [0, {n_fine})"
                    )));
                }
                if assignment[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {i} appears in sets {} and {r}",
                        assignment[i]
                    )));
                }
                assignment[i] = r;
            }
        }
        if let Some(i) = assignment.iter().position(|&r| r == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "vertex {i} is not covered"
            )));
        }
        Ok(Self {
            n_fine,
            sets,
            assignment,
        })
    }

    /// Like [`Partition::new`] but numbers coarse vertices by smallest member.
    pub fn canonical(n_fine: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut p = Self::new(n_fine, sets)?;
        p.sets.sort_by_key(|s| s[0]);
        for (r, set) in p.sets.iter().enumerate() {
            for &i in set {
                p.assignment[i] = r;
            }
        }
        Ok(p)
    }

    /// All-singleton partition.
    pub fn identity(n: usize) -> Self {
        Self {
            n_fine: n,
            sets: (0..n).map(|i| vec![i]).collect(),
            assignment: (0..n).collect(),
        }
    }

    /// Builds from `assignment[i] = coarse vertex of i`; coarse ids must be
    /// exactly `0..n_coarse`.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        let n_coarse = assignment.iter().map(|&r| r + 1).max().unwrap_or(0);
        let mut sets = vec![Vec::new(); n_coarse];
        for (i, &r) in assignment.iter().enumerate() {
            sets[r].push(i);
        }
        Self::new(assignment.len(), sets)
    }

    pub fn n_fine(&self) -> usize {
        self.n_fine
    }

    pub fn n_coarse(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn coarse_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn set_sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.sets.len() == self.n_fine
    }

    /// Checks that every set induces a connected subgraph of `l`'s graph.
    pub fn check_connected(&self, l: &Laplacian) -> Result<()> {
        if l.dim() != self.n_fine {
            return Err(Error::DimensionMismatch {
                expected: self.n_fine,
                actual: l.dim(),
            });
        }
        for set in self.sets.iter().filter(|s| s.len() > 1) {
            if !induces_connected(l, set) {
                return Err(Error::DisconnectedSet { set: set.clone() });
            }
        }
        Ok(())
    }

    fn check_len(expected: usize, actual: usize) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, actual })
        }
    }

    /// `P x`: the mean of `x` over each set.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        Self::check_len(self.n_fine, x.len())?;
        Ok(self
            .sets
            .iter()
            .map(|s| s.iter().map(|&i| x[i]).sum::<f64>() / s.len() as f64)
            .collect())
    }

    /// `P+ x_c`: each fine vertex receives the value of its set.
    pub fn lift(&self, xc: &[f64]) -> Result<Vec<f64>> {
        Self::check_len(self.n_coarse(), xc.len())?;
        Ok(self.assignment.iter().map(|&r| xc[r]).collect())
    }

    /// `Pi x = P+ P x`.
    pub fn apply_pi(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.lift(&self.project(x)?)
    }

    /// `(I - Pi) x`.
    pub fn apply_pi_complement(&self, x: &[f64]) -> Result<Vec<f64>> {
        let pix = self.apply_pi(x)?;
        Ok(x.iter().zip(pix).map(|(a, b)| a - b).collect())
    }

    /// `P X` for a block of column vectors.
    pub fn project_matrix(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        Self::check_len(self.n_fine, x.nrows())?;
        let mut out = DMatrix::zeros(self.n_coarse(), x.ncols());
        for c in 0..x.ncols() {
            for (r, set) in self.sets.iter().enumerate() {
                out[(r, c)] = set.iter().map(|&i| x[(i, c)]).sum::<f64>() / set.len() as f64;
            }
        }
        Ok(out)
    }

    /// `P+ X_c` for a block of column vectors.
    pub fn lift_matrix(&self, xc: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        Self::check_len(self.n_coarse(), xc.nrows())?;
        let mut out = DMatrix::zeros(self.n_fine, xc.ncols());
        for c in 0..xc.ncols() {
            for (i, &r) in self.assignment.iter().enumerate() {
                out[(i, c)] = xc[(r, c)];
            }
        }
        Ok(out)
    }

    /// Dense `P` (`n_coarse x n_fine`); limited to `DENSE_LIMIT` vertices.
    pub fn dense_p(&self) -> Result<DMatrix<f64>> {
        require_dense(self.n_fine)?;
        let mut p = DMatrix::zeros(self.n_coarse(), self.n_fine);
        for (r, set) in self.sets.iter().enumerate() {
            for &i in set {
                p[(r, i)] = 1.0 / set.len() as f64;
            }
        }
        Ok(p)
    }

    /// Dense `P+` (`n_fine x n_coarse`); limited to `DENSE_LIMIT` vertices.
    pub fn dense_p_pinv(&self) -> Result<DMatrix<f64>> {
        require_dense(self.n_fine)?;
        let mut p = DMatrix::zeros(self.n_fine, self.n_coarse());
        for (i, &r) in self.assignment.iter().enumerate() {
            p[(i, r)] = 1.0;
        }
        Ok(p)
    }
}

/// Whether `set` (sorted) induces a connected subgraph of `l`'s graph.
pub(crate) fn induces_connected(l: &Laplacian, set: &[usize]) -> bool {
    if set.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; set.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for (j, _) in l.neighbors(set[p]) {
            if let Ok(q) = set.binary_search(&j) {
                if !seen[q] {
                    seen[q] = true;
                    count += 1;
                    stack.push(q);
                }
            }
        }
    }
    count == set.len()
}

/// Splits `set` (sorted) into the vertex sets of its induced connected
/// components, each sorted, ordered by smallest member.
pub(crate) fn induced_components(l: &Laplacian, set: &[usize]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; set.len()];
    let mut out = Vec::new();
    for start in 0..set.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut members = vec![set[start]];
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for (j, _) in l.neighbors(set[p]) {
                if let Ok(q) = set.binary_search(&j) {
                    if label[q] == usize::MAX {
                        label[q] = id;
                        members.push(set[q]);
                        stack.push(q);
                    }
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Coarse Laplacian `P^{-T} L P+` of a consistent coarsening, assembled
/// from cut weights: the coarse edge `{r, q}` carries the total weight of
/// fine edges between sets `r` and `q`.
pub fn coarsen_laplacian(l: &Laplacian, p: &Partition) -> Result<Laplacian> {
    p.check_connected(l)?;
    let mut cut: Vec<(usize, usize, f64)> = l
        .edges()
        .filter_map(|(i, j, w)| {
            let (r, q) = (p.coarse_of(i), p.coarse_of(j));
            match r.cmp(&q) {
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Less => Some((r, q, w)),
                std::cmp::Ordering::Greater => Some((q, r, w)),
            }
        })
        .collect();
    cut.sort_by_key(|a| (a.0, a.1));
    let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(cut.len());
    for (r, q, w) in cut {
        match merged.last_mut() {
            Some(last) if last.0 == r && last.1 == q => last.2 += w,
            _ => merged.push((r, q, w)),
        }
    }
    Ok(Laplacian::from_sorted_edges(p.n_coarse(), merged))
}
