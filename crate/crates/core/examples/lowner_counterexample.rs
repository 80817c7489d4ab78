//! Restricting `L` to a half-space leaves `L` as its minimal-integral
//! position from above, yet the polar of the restriction is not proper.

use funjohn::verify::{lowner_counterexample, CheckOptions, LownerKind};

fn main() -> funjohn::Result<()> {
    let opts = CheckOptions { seed: 11, ..Default::default() };
    for kind in [LownerKind::ExpNorm { p: 1.0 }, LownerKind::ExpNorm { p: 2.0 }, LownerKind::PolarHeightPower { s: 1.0 }] {
        for d in 1..=2 {
            let rec = lowner_counterexample(kind, d, &opts)?;
            println!(
                "{kind:?} d={d}: (L+)° at -t e1 {:?}, at +t e1 {:.3e}, min integral ratio {:.4}, passed {}",
                rec.probe_values,
                rec.control_values[3],
                rec.min_integral_ratio,
                rec.passed
            );
        }
    }
    Ok(())
}
