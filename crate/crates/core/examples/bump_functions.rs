//! Bump functions of decompositions: where they touch the height function
//! and how far their sup norm stays below `e^d`.

use funjohn::bump::{bump_from_decomposition, norm_gap_probe};
use funjohn::decomp::{generate_decomposition, regularize_decomposition};
use funjohn::linalg::hbar;
use funjohn::polar::{polar_eval, polar_of_ell};

fn main() -> funjohn::Result<()> {
    for d in 1..=3 {
        let mut dec = generate_decomposition(d, 9)?;
        if !dec.is_regular() {
            dec = regularize_decomposition(&dec, 4, 9)?;
        }
        let bf = bump_from_decomposition(&dec)?;
        let gap = norm_gap_probe(&bf)?;
        println!(
            "d={d}: sup {:.6} <= e^d = {:.6}, gap {:.4}, max over grid of h - f {:.1e}",
            gap.sup_norm,
            (d as f64).exp(),
            gap.gap,
            bf.grid_violation()
        );
        for u in dec.points().iter().take(3) {
            let atom = polar_of_ell(u)?;
            println!(
                "    u = {:?}: f(u) = {:.6} = h(u) = {:.6}, f° at atom {:.4e} >= mass {:.4e}",
                u.as_slice(),
                bf.eval(u)?,
                hbar(u),
                polar_eval(bf.function(), &atom.location)?.value,
                atom.mass
            );
        }
    }
    Ok(())
}
