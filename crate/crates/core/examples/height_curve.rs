//! Sample `Phi(t) = det(A_alpha)^{1/d}` over heights `alpha = e^t` and
//! write the curve as CSV.

use funjohn::johnsolve::{height_curve, solve_fixed_height, SolverOptions};
use funjohn::lcfunc::LogConcaveFunction;
use funjohn::linalg::vector;

fn main() -> funjohn::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let f = LogConcaveFunction::bump(&[vector(&[s]), vector(&[-s])])?;
    let h = LogConcaveFunction::height(1)?;
    let opts = SolverOptions { seed: 3, ..Default::default() };

    let alphas: Vec<f64> = (0..12).map(|i| 0.05 * (1.9f64 / 0.05).powf(i as f64 / 11.0)).collect();
    let curve = height_curve(&f, &h, &alphas, &opts)?;
    curve.write_csv(std::io::stdout())?;
    println!("largest concavity defect {:.2e}", curve.max_concavity_defect);

    let top = f.sup_norm()?;
    let pinned = solve_fixed_height(&f, &h, top, &opts)?;
    println!("at alpha = sup f = {top:.6}: A = {:.6}", pinned.position.matrix()[(0, 0)]);
    Ok(())
}
