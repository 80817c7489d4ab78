//! Positions `alpha * w(A^{-1}(x - a))`: composition, inversion, integrals
//! and interpolation between positive positions.

use funjohn::lcfunc::LogConcaveFunction;
use funjohn::linalg::{vector, Matrix, Vector};
use funjohn::position::{apply_position, interpolate_positions, position_integral, AffinePosition};

fn main() -> funjohn::Result<()> {
    let w = LogConcaveFunction::height(2)?;
    let p1 = AffinePosition::new(1.0, Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]), vector(&[0.5, 0.0]))?;
    let p2 = AffinePosition::new(0.5, Matrix::identity(2, 2) * 3.0, Vector::zeros(2))?;

    let g = apply_position(&p1, &w)?;
    let x = vector(&[0.7, 0.2]);
    println!("g(x) = {:.6}, w(pull back x) = {:.6}", g.value(&x), w.value(&p1.pull_back(&x)));

    let both = AffinePosition::compose(&p1, &p2)?;
    println!("composite: alpha {}, det {:.4}", both.alpha(), both.det());
    let back = AffinePosition::compose(&p1.invert(), &p1)?;
    println!("p1^-1 after p1 differs from identity by {:.2e}", back.max_entry_diff(&AffinePosition::identity(2)));

    let base = w.integral()?.value;
    for beta in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let mid = interpolate_positions(&p1, &p2, beta)?;
        let geometric = position_integral(&p1, base).powf(beta) * position_integral(&p2, base).powf(1.0 - beta);
        println!("beta {beta:.2}: integral {:.5} >= geometric mean {:.5}", position_integral(&mid, base), geometric);
    }
    Ok(())
}
