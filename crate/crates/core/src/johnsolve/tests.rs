use super::*;
use crate::linalg::{vector, Matrix};
use std::f64::consts::FRAC_1_SQRT_2;

fn quick() -> SolverOptions {
    SolverOptions {
        restarts: 2,
        ..SolverOptions::default()
    }
}

fn two_point_bump() -> LogConcaveFunction {
    LogConcaveFunction::bump(&[vector(&[FRAC_1_SQRT_2]), vector(&[-FRAC_1_SQRT_2])]).unwrap()
}

#[test]
fn height_is_its_own_john_position() {
    for d in [1, 2] {
        let h = LogConcaveFunction::height(d).unwrap();
        let t = std::time::Instant::now();
        let rep = solve_john(&h, &h, &quick()).unwrap();
        eprintln!("d={d} {:?} {:?}", t.elapsed(), rep.diagnostics);
        assert!(rep.feasible);
        let diff = rep.position.max_entry_diff(&AffinePosition::identity(d));
        assert!(diff < 1e-4, "d={d}: {diff:e} {:?}", rep.position);
    }
}

#[test]
fn two_point_bump_identity_and_weights() {
    let f = two_point_bump();
    let h = LogConcaveFunction::height(1).unwrap();
    let rep = solve_john(&f, &h, &quick()).unwrap();
    assert!(rep.position.max_entry_diff(&AffinePosition::identity(1)) < 1e-3);
    let cert = extract_and_certify(&f, &rep, 1e-6).unwrap();
    let w = cert.recovered_weights.clone().unwrap();
    assert_eq!(cert.contacts.len(), 2);
    assert!(w.iter().all(|c| (c - 1.0).abs() < 1e-6), "{w:?}");
    assert!(cert.nnls_residual.unwrap() <= 1e-6);
}

#[test]
fn positioned_bump_is_equivariant() {
    let pos = AffinePosition::new(2.0, Matrix::identity(1, 1) * 3.0, vector(&[1.0])).unwrap();
    let f = LogConcaveFunction::positioned(two_point_bump(), pos.clone()).unwrap();
    let h = LogConcaveFunction::height(1).unwrap();
    let rep = solve_john(&f, &h, &quick()).unwrap();
    assert!(rep.position.max_entry_diff(&pos) < 1e-3, "{:?}", rep.position);
}

#[test]
fn fixed_height_full_copy() {
    let h = LogConcaveFunction::height(2).unwrap();
    let f = h.clone().scaled(2.0).unwrap();
    let rep = solve_fixed_height(&f, &h, 2.0, &quick()).unwrap();
    assert!((rep.position.alpha() - 2.0).abs() < 1e-3);
    assert!((rep.position.matrix() - Matrix::identity(2, 2)).amax() < 1e-3);
    assert!(matches!(
        solve_fixed_height(&f, &h, 3.0, &quick()),
        Err(Error::OutOfDomain { .. })
    ));
}

#[test]
fn curve_at_unit_height() {
    let h = LogConcaveFunction::height(1).unwrap();
    let c = height_curve(&h, &h, &[1.0], &quick()).unwrap();
    assert!((c.records[0].psi - 1.0).abs() < 1e-4, "{:?}", c.records);
}

#[test]
fn tiny_function_is_infeasible() {
    let h = LogConcaveFunction::height(1).unwrap();
    let f = h.clone().scaled(1e-13).unwrap();
    assert!(matches!(solve_john(&f, &h, &quick()), Err(Error::Infeasible(_))));
}

#[test]
fn non_bounded_reference_rejected() {
    let g = LogConcaveFunction::gaussian(1).unwrap();
    assert!(matches!(solve_john(&g, &g, &quick()), Err(Error::Precondition(_))));
}
