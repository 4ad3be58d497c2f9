use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::graph::Laplacian;

/// Which contraction sets are offered to the greedy selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// One candidate `{i, j}` per edge.
    Edge,
    /// One candidate per vertex: the vertex with all its neighbours.
    Neighborhood,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Edge => "edge",
            FamilyKind::Neighborhood => "neighborhood",
        }
    }
}

/// A candidate contraction set with its cost. `stale` marks a set that
/// was rebuilt from a larger candidate after some of its vertices were
/// contracted elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    pub members: Vec<usize>,
    pub cost: f64,
    pub stale: bool,
}

impl Eq for CandidateSet {}

impl Ord for CandidateSet {
    /// Reversed `(cost, members)` order so that `BinaryHeap` pops the
    /// cheapest set first, ties going to the lexicographically smallest
    /// member list.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.members.cmp(&self.members))
    }
}

impl PartialOrd for CandidateSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Candidate sets ordered by increasing cost.
#[derive(Clone, Debug)]
pub struct CandidateFamily {
    kind: FamilyKind,
    heap: BinaryHeap<CandidateSet>,
}

impl CandidateFamily {
    /// Enumerates the family of `kind` on `l` and costs every set in
    /// parallel.
    pub fn build<F>(l: &Laplacian, kind: FamilyKind, cost: F) -> Self
    where
        F: Fn(&[usize]) -> f64 + Sync,
    {
        let sets = candidate_sets(l, kind);
        let heap = sets
            .into_par_iter()
            .map(|members| CandidateSet {
                cost: cost(&members),
                members,
                stale: false,
            })
            .collect::<Vec<_>>()
            .into();
        Self { kind, heap }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn pop(&mut self) -> Option<CandidateSet> {
        self.heap.pop()
    }

    pub fn push(&mut self, set: CandidateSet) {
        self.heap.push(set);
    }

    /// Drains the family in pop order.
    pub fn into_sorted_vec(mut self) -> Vec<CandidateSet> {
        std::iter::from_fn(|| self.heap.pop()).collect()
    }
}

/// Sorted member lists of the family, without duplicates.
pub fn candidate_sets(l: &Laplacian, kind: FamilyKind) -> Vec<Vec<usize>> {
    match kind {
        FamilyKind::Edge => l.edges().map(|(i, j, _)| vec![i, j]).collect(),
        FamilyKind::Neighborhood => {
            let mut sets: Vec<Vec<usize>> = (0..l.dim())
                .filter(|&i| l.neighbor_count(i) > 0)
                .map(|i| {
                    let mut s: Vec<usize> = std::iter::once(i)
                        .chain(l.neighbors(i).map(|(j, _)| j))
                        .collect();
                    s.sort_unstable();
                    s
                })
                .collect();
            sets.sort_unstable();
            sets.dedup();
            sets
        }
    }
}
