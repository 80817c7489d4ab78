use funjohn::acceptance::corpus_bump;
use funjohn::bump::bump_from_decomposition;
use funjohn::decomp::{generate_decomposition, hull_ball_margin, verify_decomposition};
use funjohn::lcfunc::LogConcaveFunction;
use funjohn::linalg::{hbar, random_spd, vector, Matrix, Vector};
use funjohn::polar::{polar_eval, polar_of_ell};
use funjohn::position::{apply_position, interpolate_positions, AffinePosition};
use funjohn::sampling::{ball_grid, random_in_ball, rng};
use funjohn::verify::{check_domination, CheckOptions};
use proptest::prelude::*;
use rand::Rng;

fn variants(d: usize) -> Vec<LogConcaveFunction> {
    let mut v = vec![
        LogConcaveFunction::height(d).unwrap(),
        LogConcaveFunction::height_power(d, 2.5).unwrap(),
        LogConcaveFunction::ball_indicator(0.8, Vector::from_element(d, 0.1)).unwrap(),
        LogConcaveFunction::gaussian(d).unwrap(),
        LogConcaveFunction::exp_norm(d, 1.0).unwrap(),
        LogConcaveFunction::exp_norm(d, 3.0).unwrap(),
        LogConcaveFunction::polar_height_power(d, 1.0).unwrap(),
        corpus_bump(d, 2).unwrap().function().clone(),
    ];
    let mut e = Vector::zeros(d);
    e[0] = 1.0;
    v.push(LogConcaveFunction::half_restriction(LogConcaveFunction::gaussian(d).unwrap(), e).unwrap());
    let pos = AffinePosition::new(1.3, Matrix::identity(d, d) * 0.7, Vector::from_element(d, 0.2)).unwrap();
    v.push(LogConcaveFunction::positioned(corpus_bump(d, 3).unwrap().function().clone(), pos).unwrap());
    v
}

fn point(d: usize, seed: u64, radius: f64) -> Vector {
    random_in_ball(d, radius, &mut rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functions_are_log_concave(d in 1usize..=3, sx in any::<u64>(), sy in any::<u64>(), lambda in 0.01f64..0.99) {
        let (x, y) = (point(d, sx, 1.5), point(d, sy, 1.5));
        for f in variants(d) {
            let (fx, fy) = (f.value(&x), f.value(&y));
            let mid = f.value(&(&x * lambda + &y * (1.0 - lambda)));
            prop_assert!(mid >= fx.powf(lambda) * fy.powf(1.0 - lambda) - 1e-12, "{f:?}");
        }
    }

    #[test]
    fn polar_is_log_concave(d in 1usize..=2, seed in 0u64..50, sp in any::<u64>(), sq in any::<u64>(), lambda in 0.01f64..0.99) {
        let f = corpus_bump(d, seed).unwrap();
        let (p, q) = (point(d, sp, 0.6), point(d, sq, 0.6));
        let v = |z: &Vector| polar_eval(f.function(), z).unwrap().value;
        prop_assert!(v(&(&p * lambda + &q * (1.0 - lambda))) >= v(&p).powf(lambda) * v(&q).powf(1.0 - lambda) - 1e-12);
    }

    #[test]
    fn polar_reverses_order(d in 1usize..=2, seed in 0u64..1000, extra in any::<u64>(), sp in any::<u64>()) {
        // Adding anchors can only lower a bump.
        let dec = generate_decomposition(d, seed).unwrap();
        let f = LogConcaveFunction::bump(dec.points()).unwrap();
        let mut anchors = dec.points().to_vec();
        anchors.push(point(d, extra, 0.95));
        let g = LogConcaveFunction::bump(&anchors).unwrap();
        let p = point(d, sp, 0.5);
        prop_assert!(polar_eval(&g, &p).unwrap().value >= polar_eval(&f, &p).unwrap().value - 1e-12);
    }

    #[test]
    fn decompositions_are_valid(d in 1usize..=3, seed in any::<u64>()) {
        let dec = generate_decomposition(d, seed).unwrap();
        let r = verify_decomposition(&dec, 1e-10);
        prop_assert!(r.passed);
        prop_assert!(r.weight_sum <= 1e-9);
        prop_assert!(hull_ball_margin(&dec).unwrap().margin >= -1e-9);
    }

    #[test]
    fn bumps_touch_height_at_anchors(d in 1usize..=3, seed in any::<u64>()) {
        let dec = generate_decomposition(d, seed).unwrap();
        let bf = bump_from_decomposition(&dec).unwrap();
        for u in dec.points().iter().filter(|u| u.norm() < 1.0) {
            prop_assert!((bf.eval(u).unwrap() - hbar(u)).abs() <= 1e-12);
            let atom = polar_of_ell(u).unwrap();
            prop_assert!(polar_eval(bf.function(), &atom.location).unwrap().value >= atom.mass - 1e-9);
        }
        prop_assert!(bf.function().sup_norm().unwrap() <= (d as f64).exp());
    }

    #[test]
    fn domination_is_reproducible_and_shifts_with_scale(d in 1usize..=2, seed in 0u64..200, check_seed in any::<u64>()) {
        let f = corpus_bump(d, seed).unwrap().function().clone();
        let h = LogConcaveFunction::height(d).unwrap();
        let opts = CheckOptions { seed: check_seed, lattice: 41, starts: 8 };
        let a = check_domination(&h, &f, 1.0, &opts).unwrap();
        let b = check_domination(&h, &f, 1.0, &opts).unwrap();
        prop_assert_eq!(&a, &b);
        let eps = 1e-3;
        let up = check_domination(&h.clone().scaled(1.0 + eps).unwrap(), &f, 1.0, &opts).unwrap();
        prop_assert!((up.max_log_violation - a.max_log_violation - (1.0f64 + eps).ln()).abs() <= 1e-12);
    }
}

#[test]
fn height_above_scaled_indicator() {
    for d in 1..=3 {
        let r = (d as f64 / (d as f64 + 1.0)).sqrt();
        for x in ball_grid(d, r, 2000) {
            assert!(hbar(&x) >= 1.0 / ((d + 1) as f64).sqrt() - 1e-15);
        }
    }
}

#[test]
fn bump_polar_matches_convex_line_search() {
    // f°(p) = exp(min_x (-p x - ln f(x))), a convex problem in d = 1.
    let mut r = rng(33);
    for _ in 0..100 {
        let n = r.random_range(1..4);
        let mut anchors = vec![];
        for k in 0..2 * n {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            anchors.push(vector(&[s * r.random_range(0.4..0.95)]));
        }
        let f = LogConcaveFunction::bump(&anchors).unwrap();
        let p = r.random_range(-0.3..0.3);
        let phi = |x: f64| -p * x - f.log_value(&vector(&[x]));
        let (mut a, mut b) = (-50.0, 50.0);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..300 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if phi(c) < phi(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let brute = phi(0.5 * (a + b)).exp();
        let lp = polar_eval(&f, &vector(&[p])).unwrap().value;
        assert!((lp - brute).abs() <= 1e-6 * brute.max(1.0), "{lp} vs {brute}");
    }
}

#[test]
fn interpolation_preserves_domination() {
    let mut r = rng(44);
    let mut premises = 0;
    for k in 0..100u64 {
        let d = 1 + (k % 3) as usize;
        let f = corpus_bump(d, k).unwrap().function().clone();
        let w = LogConcaveFunction::height(d).unwrap();
        let grid = ball_grid(d, 1.2, 2000);
        let below = |p: &AffinePosition| {
            let g = apply_position(p, &w).unwrap();
            grid.iter().all(|x| g.value(x) <= f.value(x))
        };
        let mut draw = || {
            AffinePosition::positive(
                r.random_range(0.3..1.0),
                random_spd(d, 0.3, 1.0, &mut r),
                random_in_ball(d, 0.2, &mut r),
            )
            .unwrap()
        };
        let (p1, p2) = (draw(), draw());
        if !(below(&p1) && below(&p2)) {
            continue;
        }
        premises += 1;
        let beta = r.random_range(0.0..1.0);
        let g = apply_position(&interpolate_positions(&p1, &p2, beta).unwrap(), &w).unwrap();
        for x in &grid {
            assert!(g.value(x) <= f.value(x) + 1e-10);
        }
    }
    assert!(premises >= 10, "only {premises} dominated pairs");
}

#[test]
fn generated_weights_stay_below_two() {
    let mut over = 0;
    let mut largest: f64 = 0.0;
    for d in 1..=3 {
        for seed in 0..1000 {
            let m = generate_decomposition(d, seed).unwrap().max_weight();
            largest = largest.max(m);
            if m > 2.0 + 1e-9 {
                over += 1;
            }
        }
    }
    println!("largest weight {largest}, above 2: {over}");
}
