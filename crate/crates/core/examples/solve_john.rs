//! Solve the John problem for a moved bump and certify the answer through
//! contact points and decomposition weights.

use funjohn::acceptance::corpus_bump;
use funjohn::johnsolve::{extract_and_certify, solve_john, to_john_coordinates, SolverOptions};
use funjohn::lcfunc::LogConcaveFunction;
use funjohn::linalg::{vector, Matrix};
use funjohn::position::AffinePosition;

fn main() -> funjohn::Result<()> {
    let bump = corpus_bump(2, 17)?.function().clone();
    let moved = AffinePosition::new(1.5, Matrix::from_row_slice(2, 2, &[2.0, 0.4, 0.4, 0.7]), vector(&[1.0, -2.0]))?;
    let f = LogConcaveFunction::positioned(bump, moved.clone())?;
    let h = LogConcaveFunction::height(2)?;

    let opts = SolverOptions { seed: 1, ..Default::default() };
    let rep = solve_john(&f, &h, &opts)?;
    println!("objective {:.9} (expected {:.9})", rep.objective, moved.alpha().ln() + moved.det().ln());
    println!("position error {:.2e}", rep.position.max_entry_diff(&moved));
    println!(
        "{} outer iterations, {} constraints, certified violation {:.1e}",
        rep.diagnostics.outer_iterations, rep.diagnostics.constraint_points, rep.diagnostics.max_violation
    );

    let fj = to_john_coordinates(&f, &rep)?;
    let mut at_identity = rep.clone();
    at_identity.position = AffinePosition::identity(2);
    let cert = extract_and_certify(&fj, &at_identity, 1e-6)?;
    println!("contacts {:?}", cert.contacts);
    println!("weights {:?}, residual {:?}", cert.recovered_weights, cert.nnls_residual);
    Ok(())
}
