//! The generic numeric core gives matching answers in every scalar mode.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use resumkit::fixtures;
use resumkit::graph::SpanningTree;
use resumkit::positivity::{block_decomposition, build_weakening_matrix, check_psd, residual, WeakeningVector};
use resumkit::symanzik::{symanzik_polynomial, symanzik_via_matrix_tree};
use resumkit::{ExactWeakeningMatrix, WeakeningMatrixF32, WeakeningMatrixF64};

fn path_tree_inputs() -> (resumkit::graph::Multigraph, SpanningTree, [(&'static str, i64, i64); 3]) {
    (fixtures::g_eye(), SpanningTree::new(["l1", "l2", "l5"]), [("l1", 1, 2), ("l2", 3, 10), ("l5", 4, 5)])
}

#[test]
fn weakening_matrix_in_three_modes() {
    let (g, t, w) = path_tree_inputs();
    let exact: ExactWeakeningMatrix =
        build_weakening_matrix(&g, &t, &WeakeningVector::new(w.map(|(l, n, d)| (l, BigRational::new(n.into(), d.into()))))).unwrap();
    let f64m: WeakeningMatrixF64 = build_weakening_matrix(&g, &t, &WeakeningVector::new(w.map(|(l, n, d)| (l, n as f64 / d as f64)))).unwrap();
    let f32m: WeakeningMatrixF32 = build_weakening_matrix(&g, &t, &WeakeningVector::new(w.map(|(l, n, d)| (l, n as f32 / d as f32)))).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let x = exact.entries[i][j].to_f64().unwrap();
            assert_eq!(x, f64m.entries[i][j]);
            assert!((x - f64::from(f32m.entries[i][j])).abs() < 1e-7);
        }
    }
    let reports = [check_psd(&exact, 1e-10).unwrap(), check_psd(&f64m, 1e-10).unwrap(), check_psd(&f32m, 1e-6).unwrap()];
    for r in &reports {
        assert!(r.psd);
        assert!((r.min_eigenvalue - reports[0].min_eigenvalue).abs() < 1e-6);
    }
}

#[test]
fn block_reconstruction_residuals() {
    let (g, t, w) = path_tree_inputs();
    let wq = WeakeningVector::new(w.map(|(l, n, d)| (l, BigRational::new(n.into(), d.into()))));
    let blocks = block_decomposition(&g, &t, &wq).unwrap();
    assert_eq!(residual(&blocks.reconstruct(), &build_weakening_matrix(&g, &t, &wq).unwrap().entries), 0.0);
    let wf = WeakeningVector::new(w.map(|(l, n, d)| (l, n as f64 / d as f64)));
    let blocks = block_decomposition(&g, &t, &wf).unwrap();
    assert!(residual(&blocks.reconstruct(), &build_weakening_matrix(&g, &t, &wf).unwrap().entries) < 1e-15);
}

#[test]
fn symanzik_in_float_and_rational() {
    let g = fixtures::g_eye();
    let u = symanzik_polynomial(&g).unwrap();
    let alpha = [0.5, 2.0, 1.25, 3.0, 0.75, 1.5];
    let exact: Vec<BigRational> = alpha.iter().map(|&a| BigRational::from_float(a).unwrap()).collect();
    let q = u.evaluate(&exact);
    assert_eq!(q, symanzik_via_matrix_tree(&g, &exact));
    let f = u.evaluate(&alpha);
    assert!((f - q.to_f64().unwrap()).abs() < 1e-12);
    assert!((symanzik_via_matrix_tree(&g, &alpha) - f).abs() < 1e-10);
}
