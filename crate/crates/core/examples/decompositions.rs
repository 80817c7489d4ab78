//! Generate decompositions of the identity and check them, then recover
//! weights from the bare points.

use funjohn::decomp::{generate_decomposition, hull_ball_margin, regularize_decomposition, verify_decomposition, weights_from_points, DEFAULT_TOL};

fn main() -> funjohn::Result<()> {
    for d in 1..=3 {
        let dec = generate_decomposition(d, 42)?;
        let res = verify_decomposition(&dec, 1e-10);
        let margin = hull_ball_margin(&dec)?;
        println!(
            "d={d}: {} points, isotropy {:.1e}, centering {:.1e}, weight sum error {:.1e}, hull margin {:.4} ({})",
            dec.len(),
            res.isotropy,
            res.centering,
            res.weight_sum,
            margin.margin,
            margin.method
        );
    }

    let dec = generate_decomposition(2, 5)?;
    let reg = regularize_decomposition(&dec, 8, 5)?;
    println!("regularized: {} points, regular {}, passes {}", reg.len(), reg.is_regular(), verify_decomposition(&reg, DEFAULT_TOL).passed);

    let fit = weights_from_points(reg.points(), 1e-6)?;
    println!("weights recovered from the points alone: residual {:.1e}", fit.residual);
    Ok(())
}
