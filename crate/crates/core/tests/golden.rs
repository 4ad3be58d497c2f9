//! Hand-derived values on tiny graphs.

mod common;

use common::*;
use graph_coarsen::spectral::{
    check_interlacing, eigenvalue_error, evaluate, restricted_epsilon, smallest_eigenpairs,
};
use graph_coarsen::variation::{local_variation_cost, SubspaceBasis};
use graph_coarsen::{coarsen_laplacian, Hierarchy, Partition, WeightedGraph};
use nalgebra::DMatrix;

#[test]
fn toy_graph_matrices_are_exact() {
    let l = graph_of(5, &toy_edges()).laplacian();
    let p = Partition::new(5, vec![vec![0, 1, 2], vec![3], vec![4]]).unwrap();
    let t = 1.0 / 3.0;
    #[rustfmt::skip]
    let p1 = DMatrix::from_row_slice(3, 5, &[
        t, t, t, 0., 0.,
        0., 0., 0., 1., 0.,
        0., 0., 0., 0., 1.,
    ]);
    assert_eq!(p.dense_p().unwrap(), p1);
    assert_eq!(
        p.dense_p_pinv().unwrap(),
        p1.transpose().map(|v| if v > 0.0 { 1.0 } else { 0.0 })
    );
    #[rustfmt::skip]
    let lc = DMatrix::from_row_slice(3, 3, &[
        2., -1., -1.,
        -1., 1., 0.,
        -1., 0., 1.,
    ]);
    assert_eq!(coarsen_laplacian(&l, &p).unwrap().to_dense(), lc);
    let x = [3.0, 6.0, 9.0, -1.0, 0.5];
    let xc = p.project(&x).unwrap();
    assert_eq!(xc, vec![6.0, -1.0, 0.5]);
    assert_eq!(p.lift(&xc).unwrap(), vec![6.0, 6.0, 6.0, -1.0, 0.5]);
    assert_eq!(p.apply_pi(&x).unwrap(), vec![6.0, 6.0, 6.0, -1.0, 0.5]);
}

#[test]
fn path3_reference_values() {
    let l = WeightedGraph::path(3).laplacian();
    let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
    let lc = coarsen_laplacian(&l, &p).unwrap();
    assert_eq!(
        lc.to_dense(),
        DMatrix::from_row_slice(2, 2, &[1., -1., -1., 1.])
    );
    let mut h = Hierarchy::new(l.clone());
    h.push_level(p, None, "manual").unwrap();
    assert!((restricted_epsilon(&h, 2).unwrap() - 0.625f64.sqrt()).abs() < 1e-9);
    assert!((eigenvalue_error(&l, &lc, 2).unwrap() - 0.5).abs() < 1e-12);
    let a = SubspaceBasis::initial(&l, 2).unwrap();
    assert!((local_variation_cost(&l, &[0, 1], a.a()).unwrap() - 0.75).abs() < 1e-9);
    let g = h.interlacing_gammas().unwrap();
    assert_eq!((g.gamma1, g.gamma2), (1.0, 2.0));
    let coarse = smallest_eigenpairs(&lc, 2).unwrap();
    assert!((coarse.values[1] - 2.0).abs() < 1e-12);
}

#[test]
fn path4_two_levels_compose() {
    // {0,1},{2,3} then the two coarse vertices merge: every vertex ends in
    // one set with composed weights 1/4.
    let l = WeightedGraph::path(4).laplacian();
    let mut h = Hierarchy::new(l);
    h.push_level(
        Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap(),
        None,
        "a",
    )
    .unwrap();
    let first = h.coarsest().to_dense();
    assert_eq!(first, DMatrix::from_row_slice(2, 2, &[1., -1., -1., 1.]));
    h.push_level(Partition::new(2, vec![vec![0, 1]]).unwrap(), None, "b")
        .unwrap();
    assert_eq!(h.sizes(), vec![4, 2, 1]);
    assert_eq!(h.dense_p().unwrap(), DMatrix::from_element(1, 4, 0.25));
    assert_eq!(h.dense_p_pinv().unwrap(), DMatrix::from_element(4, 1, 1.0));
    assert_eq!(h.coarsest().to_dense(), DMatrix::zeros(1, 1));
    assert_eq!(h.composed_row_norms_sq().unwrap(), vec![0.25]);
    let g = h.interlacing_gammas().unwrap();
    assert_eq!((g.gamma1, g.gamma2), (4.0, 4.0));
    assert!(check_interlacing(&h).unwrap().ok());
    assert_eq!(h.lift(&[2.0]).unwrap(), vec![2.0; 4]);
}

#[test]
fn identity_hierarchy_is_exact() {
    let l = graph_of(5, &toy_edges()).laplacian();
    let e = evaluate(&Hierarchy::new(l), 3).unwrap();
    assert_eq!(e.epsilon(), 0.0);
    assert_eq!(e.eig_err, 0.0);
    assert!(e.bounds_ok());
}
