use funjohn::acceptance::corpus_bump;
use funjohn::johnsolve::{solve_fixed_height, solve_john, SolveReport, SolverOptions};
use funjohn::lcfunc::LogConcaveFunction;
use funjohn::verify::{check_domination, CheckOptions};

fn opts(seed: u64) -> SolverOptions {
    SolverOptions {
        seed,
        restarts: 4,
        ..Default::default()
    }
}

fn assert_certified(f: &LogConcaveFunction, w: &LogConcaveFunction, rep: &SolveReport, tol: f64) {
    assert!(rep.feasible);
    let g = LogConcaveFunction::positioned(w.clone(), rep.position.clone()).unwrap();
    let (c, m) = g.support_ellipsoid().unwrap();
    let fresh = CheckOptions {
        seed: 0xfeed,
        ..Default::default()
    };
    let cert = check_domination(&g, f, c.norm() + m.norm(), &fresh).unwrap();
    assert!(cert.max_log_violation <= 2.0 * tol, "{cert:?}");
    let trace = &rep.diagnostics.objective_trace;
    assert!(trace.windows(2).all(|w| w[1] >= w[0]), "{trace:?}");
}

#[test]
fn bumps_admit_no_larger_height_position() {
    let h1 = LogConcaveFunction::height(1).unwrap();
    let h2 = LogConcaveFunction::height(2).unwrap();
    for (f, h) in [
        (corpus_bump(1, 3).unwrap(), &h1),
        (corpus_bump(2, 8).unwrap(), &h2),
    ] {
        for seed in 0..20 {
            let rep = solve_john(f.function(), h, &opts(seed)).unwrap();
            assert!(rep.objective.exp() <= 1.0 + 1e-6, "seed {seed}: {}", rep.objective);
            assert_certified(f.function(), h, &rep, 1e-8);
        }
    }
}

#[test]
fn sup_norm_within_exponential_of_solution() {
    for d in 1..=2 {
        let h = LogConcaveFunction::height(d).unwrap();
        for seed in 0..5 {
            let f = corpus_bump(d, 100 + seed).unwrap().function().clone().scaled(0.3 + seed as f64).unwrap();
            let rep = solve_john(&f, &h, &opts(seed)).unwrap();
            assert_certified(&f, &h, &rep, 1e-8);
            assert!(f.sup_norm().unwrap() <= (d as f64).exp() * rep.position.alpha() + 1e-6);
        }
    }
}

#[test]
fn fixed_height_at_sup_w_is_unique() {
    let f = corpus_bump(2, 12).unwrap().function().clone();
    let h = LogConcaveFunction::height(2).unwrap();
    let reps: Vec<SolveReport> = (0..8).map(|s| solve_fixed_height(&f, &h, 1.0, &opts(1000 + s)).unwrap()).collect();
    for r in &reps[1..] {
        assert!(r.position.max_entry_diff(&reps[0].position) <= 1e-3);
        assert!((r.position.alpha() - reps[0].position.alpha()).abs() <= 1e-3);
    }
}

#[test]
fn ball_inside_height() {
    // Largest multiple of a ball indicator below h: radius^2 = d/(d+1).
    for d in 1..=2 {
        let h = LogConcaveFunction::height(d).unwrap();
        let ball = LogConcaveFunction::ball_indicator(1.0, funjohn::linalg::Vector::zeros(d)).unwrap();
        let rep = solve_john(&h, &ball, &opts(5)).unwrap();
        let df = d as f64;
        let r2 = df / (df + 1.0);
        let expected = 0.5 * (1.0 - r2).ln() + df * 0.5 * r2.ln();
        assert!((rep.objective - expected).abs() < 1e-6, "{} vs {expected}", rep.objective);
        assert_certified(&h, &ball, &rep, 1e-8);
    }
}
