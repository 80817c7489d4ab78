//! Polar functions: exact routes, the numeric cross-check, single-majorant
//! atoms and an improper polar.

use funjohn::lcfunc::LogConcaveFunction;
use funjohn::linalg::{vector, Vector};
use funjohn::polar::{improperness_probe, polar_eval, polar_eval_numeric, polar_of_ell};

fn main() -> funjohn::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bump = LogConcaveFunction::bump(&[vector(&[s]), vector(&[-s])])?;
    let gauss = LogConcaveFunction::gaussian(1)?;
    for p in [-0.4, 0.0, 0.25, 0.5] {
        let q = vector(&[p]);
        let exact = polar_eval(&bump, &q)?;
        let numeric = polar_eval_numeric(&bump, &q, 1)?;
        println!(
            "p = {p:>5}: bump° {:.9} ({:?}), numeric {:.9}, gaussian° {:.6}",
            exact.value,
            exact.method,
            numeric.value,
            polar_eval(&gauss, &q)?.value
        );
    }
    println!("bump° at 0 = {:.9} = 1 / sup", polar_eval(&bump, &Vector::zeros(1))?.value);

    let atom = polar_of_ell(&vector(&[0.5]))?;
    println!("polar of the majorant at u = 1/2: atom at {} with mass {:.6}", atom.location[0], atom.mass);

    let cut = LogConcaveFunction::half_restriction(LogConcaveFunction::gaussian(1)?, vector(&[1.0]))?;
    let t = [1.0, 2.0, 5.0, 10.0];
    println!("half gaussian° at -t: {:?}", improperness_probe(&cut, &vector(&[-1.0]), &t)?);
    println!("half gaussian° at +t: {:?}", improperness_probe(&cut, &vector(&[1.0]), &t)?);
    Ok(())
}
