use crate::coarsening::{induced_components, Partition};
use crate::graph::Laplacian;

use super::family::{CandidateFamily, CandidateSet};

/// Result of one greedy contraction pass.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelOutcome {
    pub partition: Partition,
    /// Square root of the accumulated `(|C| - 1) cost(C)` over accepted sets.
    pub sigma: f64,
}

/// Greedy selection of disjoint contraction sets in order of increasing
/// cost.
///
/// A popped set whose members are all free is accepted when the budget
/// allows `sqrt(sigma^2 + (|C| - 1) cost) <= sigma_threshold` and dropped
/// otherwise. A set with contracted members is reduced to its free members,
/// split into connected pieces, and each piece with two or more vertices is
/// re-costed and offered again. The pass ends when the family is empty,
/// the target size is reached, or the budget is spent.
///
/// With `track_sigma == false` the costs are only used for ordering (the
/// comparison methods) and no budget is applied.
pub(crate) fn greedy_contract<F>(
    l: &Laplacian,
    mut family: CandidateFamily,
    cost: F,
    sigma_threshold: f64,
    n_target: usize,
    track_sigma: bool,
) -> LevelOutcome
where
    F: Fn(&[usize]) -> f64,
{
    let n = l.dim();
    let unlimited = !track_sigma || sigma_threshold == f64::INFINITY;
    let mut marked = vec![false; n];
    let mut n_current = n;
    let mut sigma_sq = 0.0f64;
    let mut accepted: Vec<Vec<usize>> = Vec::new();

    while n_current > n_target && (unlimited || sigma_sq.sqrt() <= sigma_threshold) {
        let Some(cand) = family.pop() else { break };
        let size = cand.members.len();
        if cand.members.iter().all(|&i| !marked[i]) {
            let next_sq = sigma_sq + (size - 1) as f64 * cand.cost;
            if unlimited || sigma_threshold >= next_sq.max(0.0).sqrt() {
                cand.members.iter().for_each(|&i| marked[i] = true);
                n_current -= size - 1;
                if track_sigma {
                    sigma_sq = next_sq;
                }
                accepted.push(cand.members);
            }
            continue;
        }
        let free: Vec<usize> = cand
            .members
            .iter()
            .copied()
            .filter(|&i| !marked[i])
            .collect();
        if free.len() < 2 {
            continue;
        }
        for piece in induced_components(l, &free) {
            if piece.len() >= 2 {
                family.push(CandidateSet {
                    cost: cost(&piece),
                    members: piece,
                    stale: true,
                });
            }
        }
    }

    let mut sets = accepted;
    sets.extend((0..n).filter(|&i| !marked[i]).map(|i| vec![i]));
    let partition =
        Partition::canonical(n, sets).expect("accepted sets are disjoint and padded to a cover");
    LevelOutcome {
        partition,
        sigma: sigma_sq.max(0.0).sqrt(),
    }
}
