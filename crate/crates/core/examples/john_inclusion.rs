//! The inclusions for functions in John position: the height function
//! below `f`, and the polar of `f` bounded below on `B/(d+1)`.

use funjohn::acceptance::corpus_bump;
use funjohn::lcfunc::LogConcaveFunction;
use funjohn::verify::{check_domination, john_inclusion_check, CheckOptions};

fn main() -> funjohn::Result<()> {
    let opts = CheckOptions::default();
    for d in 1..=3 {
        let bf = corpus_bump(d, 21)?;
        let rec = john_inclusion_check(bf.function(), &opts)?;
        println!(
            "d={d}: max log(h/f) {:.1e}, min polar {:.5} vs e^-(d+1) = {:.5}, John position certified {}",
            rec.height_below.max_log_violation, rec.polar_floor.min_value, rec.polar_floor.bound, rec.john_position_certified
        );
    }

    let h = LogConcaveFunction::height(1)?;
    let over = h.clone().scaled(1.01)?;
    let cert = check_domination(&over, &h, 1.0, &opts)?;
    println!(
        "1.01 h <= h fails: violation {:.6} = ln 1.01 at x = {:?}",
        cert.max_log_violation, cert.witness
    );
    Ok(())
}
