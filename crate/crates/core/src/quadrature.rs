//! Numerical integration: adaptive Gauss–Kronrod (G7/K15) in one and two
//! dimensions, and randomly shifted Halton sampling for boxes in higher
//! dimensions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::sampling::{halton, rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive integration of `f` over `[a, b]` to absolute tolerance
/// `abs_tol` or relative tolerance `rel_tol`, whichever is looser.
pub fn integrate_1d<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Estimate {
    const MAX_INTERVALS: usize = 4000;
    // A few initial panels keep the error estimate honest for kinks that
    // happen to sit symmetrically in a single panel.
    const INITIAL_PANELS: usize = 4;
    let mut intervals = Vec::with_capacity(64);
    let mut total = 0.0;
    let mut err = 0.0;
    for k in 0..INITIAL_PANELS {
        let lo = a + (b - a) * k as f64 / INITIAL_PANELS as f64;
        let hi = a + (b - a) * (k + 1) as f64 / INITIAL_PANELS as f64;
        let (v, e) = gk15(&mut f, lo, hi);
        total += v;
        err += e;
        intervals.push((lo, hi, v, e));
    }
    while err > abs_tol.max(rel_tol * total.abs()) && intervals.len() < MAX_INTERVALS {
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, v, e) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        total += v1 + v2 - v;
        err += e1 + e2 - e;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    // Re-sum to shed drift from incremental updates.
    let value = intervals.iter().map(|t| t.2).sum();
    let error = intervals.iter().map(|t| t.3).sum();
    Estimate { value, error }
}

/// Nested adaptive integration over the rectangle `[lo0,hi0] x [lo1,hi1]`.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    lo: [f64; 2],
    hi: [f64; 2],
    abs_tol: f64,
    rel_tol: f64,
) -> Estimate {
    let mut inner_err = 0.0;
    let inner_abs = abs_tol / (hi[0] - lo[0]).max(1.0) * 0.1;
    let outer = integrate_1d(
        |x| {
            let est = integrate_1d(|y| f(x, y), lo[1], hi[1], inner_abs, rel_tol * 0.1);
            inner_err = f64::max(inner_err, est.error);
            est.value
        },
        lo[0],
        hi[0],
        abs_tol,
        rel_tol,
    );
    Estimate {
        value: outer.value,
        error: outer.error + inner_err * (hi[0] - lo[0]),
    }
}

/// Randomly shifted Halton estimate of the integral of `f` over a box,
/// using `n` points split across 8 independent shifts. The reported error
/// is the standard error across shifts.
pub fn qmc_box<F: Fn(&[f64]) -> f64>(f: F, lo: &[f64], hi: &[f64], n: usize, seed: u64) -> Estimate {
    const SHIFTS: usize = 8;
    let d = lo.len();
    let per = (n / SHIFTS).max(1);
    let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let mut g = rng(seed);
    let mut means = Vec::with_capacity(SHIFTS);
    let mut x = vec![0.0; d];
    for _ in 0..SHIFTS {
        let shift: Vec<f64> = (0..d).map(|_| g.random::<f64>()).collect();
        let mut acc = 0.0;
        for k in 0..per {
            let h = halton(k as u64, d);
            for j in 0..d {
                let u = (h[j] + shift[j]).fract();
                x[j] = lo[j] + (hi[j] - lo[j]) * u;
            }
            acc += f(&x);
        }
        means.push(vol * acc / per as f64);
    }
    let mean = means.iter().sum::<f64>() / SHIFTS as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (SHIFTS - 1) as f64;
    Estimate {
        value: mean,
        error: (var / SHIFTS as f64).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn semicircle_area() {
        let est = integrate_1d(|x: f64| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, 1e-12, 1e-12);
        assert!((est.value - PI / 2.0).abs() < 1e-9, "{est:?}");
    }

    #[test]
    fn polynomial_exact() {
        let est = integrate_1d(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1e-14, 1e-14);
        assert!((est.value - (64.0 / 6.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn pyramid_volume_2d() {
        let est = integrate_2d(
            |x: f64, y: f64| (1.0 - x.abs() - y.abs()).max(0.0),
            [-1.0, -1.0],
            [1.0, 1.0],
            1e-9,
            1e-9,
        );
        assert!((est.value - 2.0 / 3.0).abs() < 1e-7, "{est:?}");
    }

    #[test]
    fn qmc_gaussian_3d() {
        let est = qmc_box(
            |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(),
            &[-6.0; 3],
            &[6.0; 3],
            200_000,
            5,
        );
        let exact = PI.powf(1.5);
        assert!((est.value - exact).abs() < 5.0 * est.error, "{est:?}");
        assert!(est.error < 1e-2 * exact);
    }
}
