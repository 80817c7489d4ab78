//! Evaluate the shipped log-concave families with their sup norms and integrals.

use funjohn::lcfunc::LogConcaveFunction;
use funjohn::linalg::vector;

fn main() -> funjohn::Result<()> {
    let x = vector(&[0.3, -0.4]);
    let family = [
        ("height", LogConcaveFunction::height(2)?),
        ("height power s=3", LogConcaveFunction::height_power(2, 3.0)?),
        ("ball r=0.8", LogConcaveFunction::ball_indicator(0.8, vector(&[0.0, 0.0]))?),
        ("gaussian", LogConcaveFunction::gaussian(2)?),
        ("exp norm p=1", LogConcaveFunction::exp_norm(2, 1.0)?),
        ("polar height", LogConcaveFunction::polar_height_power(2, 1.0)?),
        ("bump", LogConcaveFunction::bump(&[vector(&[0.6, 0.0]), vector(&[-0.3, 0.5]), vector(&[-0.3, -0.5])])?),
    ];
    println!("{:<18} {:>12} {:>12} {:>12}", "function", "f(x)", "sup f", "integral");
    for (name, f) in &family {
        let integral = f.integral()?;
        println!("{name:<18} {:>12.6} {:>12.6} {:>12.6}", f.value(&x), f.sup_norm()?, integral.value);
    }

    let half = LogConcaveFunction::half_restriction(LogConcaveFunction::gaussian(2)?, vector(&[1.0, 0.0]))?;
    println!("gaussian cut to x1 >= 0: f(-0.1, 0) = {}, f(0.1, 0) = {:.6}", half.value(&vector(&[-0.1, 0.0])), half.value(&vector(&[0.1, 0.0])));
    Ok(())
}
