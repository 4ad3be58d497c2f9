#![allow(dead_code)]

use graph_coarsen::coarsening::Hierarchy;
use graph_coarsen::variation::{coarsen_multilevel, FamilyKind, Subspace};
use graph_coarsen::{coarsen_laplacian, Laplacian, Partition, WeightedGraph};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Edges = Vec<(usize, usize, f64)>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random spanning tree plus extra edges with probability `p`; weights are
/// either all one or uniform in [0.25, 4].
pub fn random_connected_edges(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Edges {
    let unit = rng.gen_bool(0.3);
    let w = |rng: &mut ChaCha8Rng| if unit { 1.0 } else { rng.gen_range(0.25..4.0) };
    let mut edges = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for idx in 1..n {
        let parent = order[rng.gen_range(0..idx)];
        let (a, b) = (order[idx].min(parent), order[idx].max(parent));
        edges.push((a, b, w(rng)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.iter().any(|&(a, b, _)| a == i && b == j) && rng.gen_bool(p) {
                edges.push((i, j, w(rng)));
            }
        }
    }
    edges.sort_by_key(|x| (x.0, x.1));
    edges
}

pub fn graph_of(n: usize, edges: &Edges) -> WeightedGraph {
    WeightedGraph::new(n, edges.iter().copied()).expect("generated graphs are valid")
}

pub fn edges_of(l: &Laplacian) -> Edges {
    l.edges().collect()
}

/// Random partition into connected sets of at most `max_size` vertices,
/// grown breadth first from random seeds.
pub fn random_connected_partition(
    rng: &mut ChaCha8Rng,
    l: &Laplacian,
    max_size: usize,
) -> Partition {
    let n = l.dim();
    let mut taken = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut sets = Vec::new();
    for &seed in &order {
        if taken[seed] {
            continue;
        }
        let size = rng.gen_range(1..=max_size);
        let mut set = vec![seed];
        taken[seed] = true;
        let mut frontier = 0;
        while set.len() < size && frontier < set.len() {
            let v = set[frontier];
            let mut nbrs: Vec<usize> = l
                .neighbors(v)
                .map(|(j, _)| j)
                .filter(|&j| !taken[j])
                .collect();
            nbrs.shuffle(rng);
            for j in nbrs {
                if set.len() < size {
                    taken[j] = true;
                    set.push(j);
                }
            }
            frontier += 1;
        }
        sets.push(set);
    }
    Partition::new(n, sets).expect("grown sets cover the graph")
}

/// Up to `levels` random contraction levels; levels that do not shrink the
/// graph are skipped.
pub fn random_partition_hierarchy(rng: &mut ChaCha8Rng, l: &Laplacian, levels: usize) -> Hierarchy {
    let mut h = Hierarchy::new(l.clone());
    for _ in 0..levels {
        let p = random_connected_partition(rng, h.coarsest(), 3);
        if p.n_coarse() < p.n_fine() {
            h.push_level(p, None, "random")
                .expect("random levels are valid");
        }
    }
    h
}

/// Local variation hierarchy with random family, target and threshold.
pub fn random_variation_hierarchy(rng: &mut ChaCha8Rng, l: &Laplacian, k: usize) -> Hierarchy {
    let n = l.dim();
    let kind = if rng.gen_bool(0.5) {
        FamilyKind::Edge
    } else {
        FamilyKind::Neighborhood
    };
    let target = rng.gen_range(k.max(1)..=n.max(k));
    let eps = if rng.gen_bool(0.5) {
        f64::INFINITY
    } else {
        rng.gen_range(0.05..2.0)
    };
    coarsen_multilevel(l, &Subspace::Eigen(k), eps, target, kind).expect("coarsening succeeds")
}

/// Coarse Laplacian from the dense product `P^{+T} L P^+`.
pub fn dense_coarse(l: &Laplacian, p: &Partition) -> DMatrix<f64> {
    let pinv = p.dense_p_pinv().unwrap();
    pinv.transpose() * l.to_dense() * pinv
}

pub fn coarse_dense_fast(l: &Laplacian, p: &Partition) -> DMatrix<f64> {
    coarsen_laplacian(l, p).unwrap().to_dense()
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).abs().max()
}

/// Two triangles joined by a bridge.
pub fn barbell() -> Edges {
    vec![
        (0, 1, 1.0),
        (0, 2, 1.0),
        (1, 2, 1.0),
        (2, 3, 1.0),
        (3, 4, 1.0),
        (3, 5, 1.0),
        (4, 5, 1.0),
    ]
}

/// Triangle `0 1 2` with pendant vertices `3` and `4` attached to `2`.
pub fn toy_edges() -> Edges {
    vec![
        (0, 1, 1.0),
        (0, 2, 1.0),
        (1, 2, 1.0),
        (2, 3, 1.0),
        (2, 4, 1.0),
    ]
}

/// Seeded simple `d`-regular graph on `n` vertices by the pairing model:
/// stubs are matched at random, a pair that would create a loop or a
/// duplicate edge is redrawn, and the whole matching restarts when no
/// valid pair remains.
pub fn random_regular(n: usize, d: usize, seed: u64) -> WeightedGraph {
    assert!((n * d).is_multiple_of(2) && d < n);
    let mut rng = rng(seed);
    'attempt: loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n * d / 2);
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..100 {
                let a = rng.gen_range(0..stubs.len());
                let b = rng.gen_range(0..stubs.len());
                let (u, v) = (stubs[a].min(stubs[b]), stubs[a].max(stubs[b]));
                if a == b || u == v || seen.contains(&(u, v)) {
                    continue;
                }
                seen.insert((u, v));
                edges.push((u, v, 1.0));
                let (hi, lo) = (a.max(b), a.min(b));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                placed = true;
                break;
            }
            if !placed {
                continue 'attempt;
            }
        }
        return WeightedGraph::new(n, edges).expect("pairing yields a simple graph");
    }
}
