//! Production code against the dense reference implementations.

mod common;

use coarsen_oracles as oracle;
use common::*;
use graph_coarsen::spectral::{kmeans_cost, restricted_epsilons, smallest_eigenpairs};
use graph_coarsen::variation::{local_laplacian, local_variation_cost, SubspaceBasis};
use graph_coarsen::{coarsen_laplacian, Hierarchy};
use nalgebra::DMatrix;
use rand::Rng;

#[test]
fn coarse_laplacian_matches_dense_reduction() {
    let mut r = rng(11);
    for _ in 0..60 {
        let n = r.gen_range(2..=40);
        let edges = random_connected_edges(&mut r, n, 0.2);
        let l = graph_of(n, &edges).laplacian();
        let p = random_connected_partition(&mut r, &l, 4);
        let dense_p = oracle::consistent_p(n, p.sets()).unwrap();
        let want =
            oracle::dense_reduce(&oracle::dense_laplacian(n, &edges).unwrap(), &dense_p).unwrap();
        let got = coarsen_laplacian(&l, &p).unwrap().to_dense();
        assert!(max_abs_diff(&got, &want) <= 1e-10 * l.max_degree().max(1.0));
    }
}

#[test]
fn local_laplacian_matches_dense_definition() {
    let mut r = rng(12);
    for _ in 0..40 {
        let n = r.gen_range(3..=20);
        let edges = random_connected_edges(&mut r, n, 0.3);
        let l = graph_of(n, &edges).laplacian();
        let p = random_connected_partition(&mut r, &l, 5);
        let set = p.sets().iter().max_by_key(|s| s.len()).unwrap().clone();
        let got = local_laplacian(&l, &set).unwrap().to_dense();
        let want = oracle::dense_local_laplacian(n, &edges, &set).unwrap();
        assert!(max_abs_diff(&got, &want) <= 1e-12);
    }
}

#[test]
fn variation_cost_matches_dense_gram_eigenvalue() {
    let mut r = rng(13);
    let mut checked = 0;
    while checked < 60 {
        let n = r.gen_range(3..=30);
        let edges = random_connected_edges(&mut r, n, 0.2);
        let l = graph_of(n, &edges).laplacian();
        let p = random_connected_partition(&mut r, &l, 4);
        let Some(set) = p.sets().iter().find(|s| s.len() >= 2).cloned() else {
            continue;
        };
        let k = r.gen_range(1..=n.min(6));
        let a = if checked % 2 == 0 {
            SubspaceBasis::initial(&l, k).unwrap().a().clone()
        } else {
            DMatrix::from_fn(n, k, |_, _| r.gen_range(-1.0..1.0))
        };
        let got = local_variation_cost(&l, &set, &a).unwrap();
        let want = oracle::dense_variation_cost(n, &edges, &set, &a).unwrap();
        assert!(
            (got - want).abs() <= 1e-9 * want.abs().max(1e-12),
            "{got} vs {want}"
        );
        checked += 1;
    }
}

#[test]
fn restricted_epsilons_match_dense_pseudo_inverse() {
    let mut r = rng(14);
    for _ in 0..60 {
        let n = r.gen_range(3..=30);
        let edges = random_connected_edges(&mut r, n, 0.2);
        let l = graph_of(n, &edges).laplacian();
        let p = random_connected_partition(&mut r, &l, 3);
        if p.is_identity() {
            continue;
        }
        let k = r.gen_range(1..=p.n_coarse().min(6));
        let dense_p = oracle::consistent_p(n, p.sets()).unwrap();
        let mut h = Hierarchy::new(l.clone());
        h.push_level(p, None, "random").unwrap();
        let got = restricted_epsilons(&h, k).unwrap();
        let want = oracle::dense_restricted_epsilons(&l.to_dense(), &dense_p, k).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-8, "{got:?} vs {want:?}");
        }
    }
}

#[test]
fn kmeans_cost_matches_pairwise_definition() {
    let mut r = rng(15);
    for _ in 0..40 {
        let n = r.gen_range(2..=25);
        let l = graph_of(n, &random_connected_edges(&mut r, n, 0.2)).laplacian();
        let p = random_connected_partition(&mut r, &l, 4);
        let d = r.gen_range(1..=4);
        let x = DMatrix::from_fn(n, d, |_, _| r.gen_range(-2.0..2.0));
        let got = kmeans_cost(&x, &p).unwrap();
        let want = oracle::kmeans_cost(&x, p.assignment());
        assert!((got - want).abs() <= 1e-10 * want.max(1.0));
    }
}

#[test]
fn eigenpairs_match_dense_spectrum() {
    let mut r = rng(16);
    for _ in 0..20 {
        let n = r.gen_range(2..=60);
        let edges = random_connected_edges(&mut r, n, 0.2);
        let l = graph_of(n, &edges).laplacian();
        let k = r.gen_range(1..=n);
        let got = smallest_eigenpairs(&l, k).unwrap();
        let want = oracle::eigenvalues(&oracle::dense_laplacian(n, &edges).unwrap()).unwrap();
        for (g, w) in got.values.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-9 * want[n - 1].max(1.0));
        }
    }
}
