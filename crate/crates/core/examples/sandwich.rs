//! Rescale a function in John position so that it sits between the ball
//! indicator and an exponential envelope.

use funjohn::acceptance::corpus_bump;
use funjohn::lcfunc::LogConcaveFunction;
use funjohn::verify::{sandwich_construct, CheckOptions};

fn main() -> funjohn::Result<()> {
    let opts = CheckOptions::default();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let two_point = LogConcaveFunction::bump(&[funjohn::linalg::vector(&[s]), funjohn::linalg::vector(&[-s])])?;
    let mut cases = vec![("two-point bump".to_string(), two_point)];
    for d in 2..=3 {
        cases.push((format!("corpus bump d={d}"), corpus_bump(d, 4)?.function().clone()));
    }
    for (name, f) in cases {
        let rec = sandwich_construct(&f, &opts)?;
        println!("{name}: {} <= f~ <= {}", rec.left_floor, rec.right_envelope);
        println!(
            "    min f~ on B {:.6}, max log(f~/envelope) {:.3} up to R* = {:.1}, tail margin {:.3}, passed {}",
            rec.left.min_value, rec.right.max_log_violation, rec.tail.r_star, rec.tail.log_margin_at_r_star, rec.passed
        );
    }
    Ok(())
}
