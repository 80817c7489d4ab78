//! The acceptance suite: eleven numbered criteria, each a self-contained
//! run over a fixed seeded corpus with its own tolerance and time budget.

use std::f64::consts::{E, FRAC_1_SQRT_2};
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bump::{bump_from_decomposition, norm_gap_probe, JohnBumpFunction};
use crate::decomp::{generate_decomposition, hull_ball_margin, verify_decomposition, FunctionalJohnDecomposition};
use crate::error::Result;
use crate::johnsolve::{extract_and_certify, height_curve, solve_john, SolverOptions};
use crate::lcfunc::LogConcaveFunction;
use crate::linalg::{random_spd, random_unit, vector, Matrix, Vector};
use crate::polar::{polar_eval, polar_of_ell};
use crate::position::{interpolate_positions, position_integral, AffinePosition};
use crate::sampling::{random_in_ball, rng};
use crate::verify::{john_inclusion_check, lowner_counterexample, sandwich_construct, CheckOptions, LownerKind};

pub const CRITERIA: [u8; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CriterionOutcome {
    /// One line: verdict, id, title, measured quantities and time.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {} ({:.1} s of {:.0} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds,
            self.budget_seconds
        )
    }
}

fn title(id: u8) -> (&'static str, f64) {
    match id {
        1 => ("decomposition identities", 10.0),
        2 => ("hull contains ball/(d+1)", 60.0),
        3 => ("polar inclusion", 300.0),
        4 => ("norm bound and gap", 60.0),
        5 => ("sandwich", 300.0),
        6 => ("solver fixed point and certification", 120.0),
        7 => ("equivariance", 600.0),
        8 => ("height curve", 600.0),
        9 => ("interpolation and Minkowski", 30.0),
        10 => ("polar engine exactness", 120.0),
        11 => ("Löwner counterexample", 300.0),
        _ => ("unknown", 0.0),
    }
}

pub fn two_point_decomposition() -> FunctionalJohnDecomposition {
    FunctionalJohnDecomposition::new(vec![vector(&[FRAC_1_SQRT_2]), vector(&[-FRAC_1_SQRT_2])], vec![1.0, 1.0])
        .expect("two-point decomposition")
}

/// The seeded bump corpus: bumps of generated decompositions.
pub fn corpus_bump(d: usize, seed: u64) -> Result<JohnBumpFunction> {
    bump_from_decomposition(&generate_decomposition(d, seed)?)
}

/// Runs one criterion; errors inside a run count as failures.
pub fn run_criterion(id: u8) -> CriterionOutcome {
    let (name, budget) = title(id);
    let start = Instant::now();
    let res = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (ok, detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome {
        id,
        title: name.to_string(),
        passed: ok && seconds <= budget,
        detail,
        seconds,
        budget_seconds: budget,
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&id| run_criterion(id)).collect()
}

type Verdict = Result<(bool, String)>;

fn c1() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut ok = true;
    for d in 1..=3 {
        for seed in 0..1000 {
            let r = verify_decomposition(&generate_decomposition(d, seed)?, 1e-10);
            worst = worst.max(r.isotropy).max(r.height).max(r.centering);
            worst_sum = worst_sum.max(r.weight_sum);
            ok &= r.isotropy <= 1e-10 && r.height <= 1e-10 && r.centering <= 1e-10 && r.weight_sum <= 1e-9;
        }
    }
    Ok((ok, format!("3000 decompositions, max residual {worst:.2e}, max |sum c - (d+1)| {worst_sum:.2e}")))
}

fn c2() -> Verdict {
    let mut min_margin = f64::INFINITY;
    for d in 1..=3 {
        for seed in 0..1000 {
            min_margin = min_margin.min(hull_ball_margin(&generate_decomposition(d, seed)?)?.margin);
        }
    }
    let two = hull_ball_margin(&two_point_decomposition())?.margin;
    let err = (two - (FRAC_1_SQRT_2 - 0.5)).abs();
    Ok((
        min_margin >= -1e-9 && err <= 1e-12,
        format!("min margin {min_margin:.3e}, two-point margin error {err:.1e}"),
    ))
}

fn c3() -> Verdict {
    let opts = CheckOptions::default();
    let mut ok = true;
    let mut worst_gap = f64::INFINITY;
    let mut worst_dom = f64::NEG_INFINITY;
    for d in 1..=3 {
        let floor = (-((d + 1) as f64)).exp();
        for seed in 0..100 {
            let bf = corpus_bump(d, seed)?;
            let rec = john_inclusion_check(bf.function(), &opts)?;
            ok &= rec.height_below.passed && rec.polar_floor.min_value >= floor - 1e-9;
            worst_gap = worst_gap.min(rec.polar_floor.min_value - floor);
            worst_dom = worst_dom.max(rec.height_below.max_log_violation);
        }
    }
    Ok((
        ok,
        format!("300 bumps, max log(h/f) {worst_dom:.2e}, min polar - e^-(d+1) {worst_gap:.3e}"),
    ))
}

fn c4() -> Verdict {
    let mut ok = true;
    let mut min_gap = f64::INFINITY;
    for d in 1..=3 {
        for seed in 0..100 {
            let r = norm_gap_probe(&corpus_bump(d, seed)?)?;
            ok &= r.sup_norm <= (d as f64).exp();
            min_gap = min_gap.min(r.gap);
        }
    }
    let two = norm_gap_probe(&bump_from_decomposition(&two_point_decomposition())?)?;
    let err = (two.sup_norm - E / 2f64.sqrt()).abs();
    Ok((
        ok && min_gap > 0.0 && err <= 1e-12,
        format!("min gap e^d - sup {min_gap:.4e}, two-point sup error {err:.1e}"),
    ))
}

fn c5() -> Verdict {
    let opts = CheckOptions::default();
    let mut ok = true;
    let mut worst_left = f64::INFINITY;
    let mut worst_right = f64::NEG_INFINITY;
    let mut constants = String::new();
    for d in 1..=3 {
        for seed in 0..100 {
            let rec = sandwich_construct(corpus_bump(d, seed)?.function(), &opts)?;
            ok &= rec.passed && rec.tail.r_star <= 40.0 * (d + 2) as f64;
            worst_left = worst_left.min(rec.left.min_value);
            worst_right = worst_right.max(rec.right.max_log_violation);
        }
    }
    let rec = sandwich_construct(&LogConcaveFunction::bump(two_point_decomposition().points())?, &opts)?;
    ok &= rec.passed && rec.left_floor == 1.0 && rec.right_envelope == "√2·e^{−|x|/3+2}";
    constants.push_str(&format!("left floor {}, right {}", rec.left_floor, rec.right_envelope));
    Ok((
        ok,
        format!("300 bumps, min f~ on B {worst_left:.6}, max log(f~/envelope) {worst_right:.3}; d=1 {constants}"),
    ))
}

fn c6() -> Verdict {
    let opts = SolverOptions::default();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for d in 1..=2 {
        let h = LogConcaveFunction::height(d)?;
        let rep = solve_john(&h, &h, &opts)?;
        let diff = rep.position.max_entry_diff(&AffinePosition::identity(d));
        worst = worst.max(diff);
        ok &= diff <= 1e-4;
    }
    let f = LogConcaveFunction::bump(two_point_decomposition().points())?;
    let h = LogConcaveFunction::height(1)?;
    let rep = solve_john(&f, &h, &opts)?;
    let bump_diff = rep.position.max_entry_diff(&AffinePosition::identity(1));
    ok &= bump_diff <= 1e-3;
    let cert = extract_and_certify(&f, &rep, 1e-6)?;
    let weights = cert.recovered_weights.clone().unwrap_or_default();
    let residual = cert.nnls_residual.unwrap_or(f64::INFINITY);
    ok &= weights.len() == 2 && weights.iter().all(|c| (c - 1.0).abs() <= 1e-6) && residual <= 1e-6;
    Ok((
        ok,
        format!("height/height max entry error {worst:.1e}, bump error {bump_diff:.1e}, weights {weights:.6?}, residual {residual:.1e}"),
    ))
}

fn c7() -> Verdict {
    let opts = SolverOptions::default();
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for k in 0..20u64 {
        let d = 1 + (k % 2) as usize;
        let bf = corpus_bump(d, k)?;
        let alpha = r.random_range(0.5..2.0);
        let m = random_spd(d, 0.5, 2.0, &mut r);
        let shift = random_in_ball(d, 0.5, &mut r);
        let pos = AffinePosition::new(alpha, m, shift)?;
        let truth = pos.alpha().ln() + pos.det().ln();
        let g = LogConcaveFunction::positioned(bf.function().clone(), pos)?;
        let rep = solve_john(&g, &LogConcaveFunction::height(d)?, &opts)?;
        worst = worst.max((rep.objective - truth).abs() / truth.abs().max(1.0));
    }
    Ok((worst <= 1e-3, format!("20 conjugations, max relative objective error {worst:.2e}")))
}

fn c8() -> Verdict {
    let f = LogConcaveFunction::bump(two_point_decomposition().points())?;
    let h = LogConcaveFunction::height(1)?;
    let (lo, hi): (f64, f64) = (0.05, 1.9);
    let alphas: Vec<f64> = (0..20).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / 19.0).exp()).collect();
    let curve = height_curve(&f, &h, &alphas, &SolverOptions::default())?;
    let all_feasible = curve.records.iter().all(|r| r.feasible);
    let t0 = h.sup_norm()?.ln();
    let bound = -1.0 + f.sup_norm()?.ln();
    Ok((
        all_feasible && curve.max_concavity_defect <= 1e-4 && t0 >= bound,
        format!(
            "max concavity defect {:.2e}, t0 = {t0} >= {bound:.6}, all feasible {all_feasible}",
            curve.max_concavity_defect
        ),
    ))
}

fn c9() -> Verdict {
    let mut r = rng(9);
    let mut ok = true;
    let mut worst_det: f64 = f64::INFINITY;
    let mut worst_int: f64 = f64::INFINITY;
    let mut detection_errors = 0;
    for d in 1..=3 {
        for k in 0..1000 {
            let a1 = random_spd(d, 0.2, 5.0, &mut r);
            let a2 = if k % 10 == 0 { a1.clone() } else { random_spd(d, 0.2, 5.0, &mut r) };
            let lambda: f64 = r.random();
            let df = d as f64;
            let mix = &a1 * lambda + &a2 * (1.0 - lambda);
            let det_gap = mix.determinant().powf(1.0 / df)
                - (lambda * a1.determinant().powf(1.0 / df) + (1.0 - lambda) * a2.determinant().powf(1.0 / df));
            worst_det = worst_det.min(det_gap);
            ok &= det_gap >= -1e-10;
            let p1 = AffinePosition::positive(r.random_range(0.5..2.0), a1.clone(), Vector::zeros(d))?;
            let p2 = AffinePosition::positive(r.random_range(0.5..2.0), a2.clone(), Vector::zeros(d))?;
            let pm = interpolate_positions(&p1, &p2, lambda)?;
            let geo = position_integral(&p1, 1.0).powf(lambda) * position_integral(&p2, 1.0).powf(1.0 - lambda);
            let rel = position_integral(&pm, 1.0) / geo - 1.0;
            worst_int = worst_int.min(rel);
            ok &= rel >= -1e-10;
            let equal = (&a1 - &a2).amax() <= 1e-8;
            if (rel <= 1e-8) != equal {
                detection_errors += 1;
            }
        }
    }
    Ok((
        ok && detection_errors == 0,
        format!("3000 pairs, min det-root gap {worst_det:.2e}, min integral gap {worst_int:.2e}, equality mismatches {detection_errors}"),
    ))
}

fn c10() -> Verdict {
    let mut ok = true;
    // Polar at the origin is the reciprocal sup norm.
    let mut variants = vec![
        LogConcaveFunction::height(2)?,
        LogConcaveFunction::height_power(2, 2.5)?,
        LogConcaveFunction::ball_indicator(0.7, vector(&[0.1, 0.2]))?,
        LogConcaveFunction::gaussian(2)?,
        LogConcaveFunction::exp_norm(2, 1.0)?,
        LogConcaveFunction::exp_norm(3, 1.5)?,
        LogConcaveFunction::polar_height_power(2, 1.0)?,
        LogConcaveFunction::bump(two_point_decomposition().points())?,
        LogConcaveFunction::height(1)?.scaled(3.0)?,
    ];
    for d in 1..=3 {
        variants.push(corpus_bump(d, 11)?.function().clone());
    }
    variants.push(LogConcaveFunction::positioned(
        corpus_bump(2, 5)?.function().clone(),
        AffinePosition::new(1.7, Matrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 0.8]), vector(&[0.4, -1.0]))?,
    )?);
    let mut worst_origin: f64 = 0.0;
    for f in &variants {
        let v = polar_eval(f, &Vector::zeros(f.dim()))?.value;
        let err = (v - 1.0 / f.sup_norm()?).abs();
        worst_origin = worst_origin.max(err);
        ok &= err <= 1e-9;
    }
    // The polar of a single majorant is one weighted atom.
    let mut r = rng(10);
    let mut worst_atom: f64 = 0.0;
    for k in 0..100 {
        let d = 1 + k % 3;
        let u = random_in_ball(d, 0.999, &mut r);
        let atom = polar_of_ell(&u)?;
        let ell = LogConcaveFunction::bump(&[u.clone()])?;
        let at = polar_eval(&ell, &atom.location)?.value;
        let off = polar_eval(&ell, &(&atom.location + random_unit(d, &mut r) * 1e-3))?.value;
        worst_atom = worst_atom.max((at - atom.mass).abs()).max(off);
        ok &= (at - atom.mass).abs() <= 1e-9 && off <= 1e-9;
    }
    // Polar at a contact point against the polar at the origin.
    let mut worst_ratio = f64::INFINITY;
    for k in 0..100u64 {
        let d = 1 + (k % 3) as usize;
        let bf = corpus_bump(d, 1000 + k)?;
        let g = bf.function();
        let anchors: Vec<&Vector> = bf.decomposition().points().iter().filter(|u| u.norm() > 0.0 && u.norm() < 1.0).collect();
        if anchors.is_empty() {
            continue;
        }
        let u = anchors[(k as usize) % anchors.len()];
        let lhs = polar_eval(g, u)?.value;
        let rhs = polar_eval(g, &Vector::zeros(d))?.value / E;
        worst_ratio = worst_ratio.min(lhs - rhs);
        ok &= lhs >= rhs - 1e-9;
    }
    Ok((
        ok,
        format!(
            "origin identity error {worst_origin:.1e} over {} variants, atom error {worst_atom:.1e}, min g°(u) - g°(0)/e {worst_ratio:.3e}",
            variants.len()
        ),
    ))
}

fn c11() -> Verdict {
    let opts = CheckOptions::default();
    let mut ok = true;
    let mut worst_probe: f64 = 0.0;
    let mut min_ratio = f64::INFINITY;
    for kind in [
        LownerKind::ExpNorm { p: 1.0 },
        LownerKind::ExpNorm { p: 2.0 },
        LownerKind::PolarHeightPower { s: 1.0 },
    ] {
        for d in 1..=2 {
            let rec = lowner_counterexample(kind, d, &opts)?;
            ok &= rec.passed;
            worst_probe = rec.probe_values.iter().fold(worst_probe, |m, v| m.max((v - 1.0).abs()));
            min_ratio = min_ratio.min(rec.min_integral_ratio);
        }
    }
    Ok((
        ok,
        format!("6 cases, max |probe - 1| {worst_probe:.1e}, min integral ratio {min_ratio:.6}"),
    ))
}
