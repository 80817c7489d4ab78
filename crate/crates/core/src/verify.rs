//! Numerical certificates: pointwise domination, the polar inclusion for
//! functions in John position, the sandwich between the ball indicator and
//! an exponential envelope, and the counterexample for Löwner functions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::johnsolve::find_contacts;
use crate::decomp::weights_from_points;
use crate::lcfunc::LogConcaveFunction;
use crate::linalg::{check_dim, expect_dim, hbar_from_sq, random_unit, symmetrize, unit, Matrix, Vector};
use crate::polar::{improperness_probe, polar_eval};
use crate::position::AffinePosition;
use crate::sampling::{ball_grid, ball_lattice, random_in_ball, rng, sphere_directions};

/// Largest tolerated `log g - log f` for a passing domination certificate.
pub const DOMINATION_TOL: f64 = 1e-8;
/// Slack on polar lower bounds.
pub const POLAR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckOptions {
    pub seed: u64,
    /// Lattice nodes per axis; `0` picks about `2 * 10^4` to `2 * 10^5` points.
    pub lattice: usize,
    /// Random ascent starts on top of the best lattice points.
    pub starts: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 0,
            lattice: 0,
            starts: 64,
        }
    }
}

impl CheckOptions {
    fn nodes(&self, d: usize) -> usize {
        if self.lattice > 0 {
            return self.lattice;
        }
        match d {
            1 => 20_001,
            2 => 401,
            3 => 61,
            _ => (1e5_f64.powf(1.0 / d as f64) as usize).max(5),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationCertificate {
    /// Largest `log g - log f` over the checked points.
    pub max_log_violation: f64,
    pub witness: Vec<f64>,
    pub points_checked: usize,
    /// Whether ascent improved on the lattice maximum.
    pub refined: bool,
    pub seed: u64,
    pub passed: bool,
}

fn log_gap(g: &LogConcaveFunction, f: &LogConcaveFunction, x: &Vector) -> f64 {
    let lg = g.log_value(x);
    if lg == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let lf = f.log_value(x);
    if lf == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    lg - lf
}

fn project_ball(x: &mut Vector, radius: f64) {
    let n = x.norm();
    if n > radius {
        *x *= radius / n;
    }
}

/// Local ascent of `log g - log f` inside the ball.
fn gap_ascent(g: &LogConcaveFunction, f: &LogConcaveFunction, mut x: Vector, radius: f64) -> (f64, Vector, usize) {
    let mut v = log_gap(g, f, &x);
    let mut evals = 1;
    let mut step = 0.05 * radius;
    for _ in 0..100 {
        if !v.is_finite() {
            break;
        }
        let grad = g.log_grad(&x) - f.log_grad(&x);
        let gn = grad.norm();
        if gn < 1e-14 {
            break;
        }
        let mut improved = false;
        let mut trial = step;
        for _ in 0..40 {
            let mut cand = &x + &grad * (trial / gn);
            project_ball(&mut cand, radius);
            let vc = log_gap(g, f, &cand);
            evals += 1;
            if vc > v {
                improved = (&cand - &x).norm() > 1e-15;
                x = cand;
                v = vc;
                break;
            }
            trial *= 0.5;
        }
        if !improved {
            break;
        }
        step = (trial * 2.0).min(radius);
    }
    (v, x, evals)
}

/// Evidence that `g <= f` on the ball of the given radius.
///
/// Scans a lattice (origin first, plus sphere samples) and then runs
/// seeded ascents of `log g - log f` from the best lattice points and from
/// random points. A point only replaces the witness when it beats it by
/// more than `1e-12` relative, so ties keep the earliest point.
pub fn check_domination(
    g: &LogConcaveFunction,
    f: &LogConcaveFunction,
    radius: f64,
    opts: &CheckOptions,
) -> Result<DominationCertificate> {
    let d = g.dim();
    expect_dim(d, f.dim())?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let beats = |v: f64, best: f64| v > best + 1e-12 * best.abs().max(1.0) || (best == f64::NEG_INFINITY && v > best);
    let mut best = f64::NEG_INFINITY;
    let mut witness = Vector::zeros(d);
    let mut count = 0;
    let mut top: Vec<(f64, Vector)> = vec![];
    let consider = |x: Vector, best: &mut f64, witness: &mut Vector, top: &mut Vec<(f64, Vector)>| {
        let v = log_gap(g, f, &x);
        if v == f64::NEG_INFINITY {
            return;
        }
        if beats(v, *best) {
            *best = v;
            *witness = x.clone();
        }
        if top.len() < 8 || v > top[top.len() - 1].0 {
            top.push((v, x));
            top.sort_by(|a, b| b.0.total_cmp(&a.0));
            top.truncate(8);
        }
    };
    let mut points = vec![Vector::zeros(d)];
    points.extend(ball_lattice(d, radius, opts.nodes(d)));
    points.extend(
        sphere_directions(d, 64 * d, opts.seed)
            .into_iter()
            .map(|u| u * radius),
    );
    for x in points {
        count += 1;
        consider(x, &mut best, &mut witness, &mut top);
    }
    let lattice_best = best;
    let mut r = rng(opts.seed);
    let mut starts: Vec<Vector> = top.iter().map(|(_, x)| x.clone()).collect();
    for _ in 0..opts.starts {
        starts.push(random_in_ball(d, radius, &mut r));
    }
    for x0 in starts {
        let (v, x, evals) = gap_ascent(g, f, x0, radius);
        count += evals;
        if v > f64::NEG_INFINITY && beats(v, best) {
            best = v;
            witness = x;
        }
    }
    Ok(DominationCertificate {
        max_log_violation: best,
        witness: witness.iter().copied().collect(),
        points_checked: count,
        refined: best > lattice_best,
        seed: opts.seed,
        passed: best <= DOMINATION_TOL,
    })
}

/// Minimum of a function over a point set, with where it is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    pub bound: f64,
    pub min_value: f64,
    pub witness: Vec<f64>,
    pub points_checked: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohnInclusionRecord {
    pub dimension: usize,
    /// `h <= f` on the unit ball.
    pub height_below: DominationCertificate,
    /// `f°(p) >= e^{-(d+1)}` on the ball of radius `1/(d+1)`.
    pub polar_floor: LowerBoundCertificate,
    /// Smallest `f°(p) - e^{-(d+1)} h((d+1) p)` on the same grid.
    pub scaled_height_margin: f64,
    /// Whether contacts of `f` with `h` carry decomposition weights, which
    /// certifies that `f` is in John position.
    pub john_position_certified: bool,
    pub passed: bool,
}

/// Checks both inclusions of the John-type theorem for `f` in John
/// position; a run on a function not in John position is flagged through
/// `john_position_certified`.
pub fn john_inclusion_check(f: &LogConcaveFunction, opts: &CheckOptions) -> Result<JohnInclusionRecord> {
    let d = f.dim();
    let h = LogConcaveFunction::height(d)?;
    let height_below = check_domination(&h, f, 1.0, opts)?;
    let dp1 = (d + 1) as f64;
    let bound = (-dp1).exp();
    let mut min_value = f64::INFINITY;
    let mut witness = Vector::zeros(d);
    let mut margin = f64::INFINITY;
    let grid = ball_grid(d, 1.0 / dp1, 1000);
    for p in &grid {
        let v = polar_eval(f, p)?.value;
        if v < min_value {
            min_value = v;
            witness = p.clone();
        }
        let hp = hbar_from_sq((p * dp1).norm_squared().min(1.0));
        margin = margin.min(v - bound * hp);
    }
    let polar_floor = LowerBoundCertificate {
        bound,
        min_value,
        witness: witness.iter().copied().collect(),
        points_checked: grid.len(),
        passed: min_value >= bound - POLAR_TOL,
    };
    let contacts = find_contacts(f, 1e-6);
    let john_position_certified = height_below.passed && !contacts.is_empty() && weights_from_points(&contacts, 1e-6).is_ok();
    let passed = height_below.passed && polar_floor.passed && margin >= -POLAR_TOL;
    Ok(JohnInclusionRecord {
        dimension: d,
        height_below,
        polar_floor,
        scaled_height_margin: margin,
        john_position_certified,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCertificate {
    /// Radius beyond which the envelope from the polar bound is used.
    pub r_star: f64,
    /// `sqrt(d/(d+1))/(d+1) - 1/(d+2)`, the decay-rate surplus.
    pub rate_surplus: f64,
    /// Smallest `f°` seen on the sphere of radius `1/(d+1)`.
    pub polar_sphere_min: f64,
    /// `log` of (envelope / right-hand side) at `r_star`; negative is good.
    pub log_margin_at_r_star: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichRecord {
    pub dimension: usize,
    /// Position of `f~ = sqrt(d+1) f(sqrt(d/(d+1)) x)` in the inverse convention.
    pub position: AffinePosition,
    pub left_floor: f64,
    /// `sqrt(d+1) * exp(-|x|/(d+2) + (d+1))`, written out.
    pub right_envelope: String,
    pub right_factor: f64,
    pub right_rate: f64,
    pub right_offset: f64,
    /// `min f~ - 1` on the closed unit ball.
    pub left: LowerBoundCertificate,
    /// `max log f~ - log(right envelope)` on the ball of radius `r_star`.
    pub right: DominationCertificate,
    pub tail: TailCertificate,
    pub passed: bool,
}

/// Envelope function `c * exp(-|x| * rate + offset)` as `log` value.
fn log_envelope(x: &Vector, factor: f64, rate: f64, offset: f64) -> f64 {
    factor.ln() - x.norm() * rate + offset
}

/// Builds `f~` and certifies `chi_B <= f~ <= sqrt(d+1) e^{-|x|/(d+2) + d + 1}`.
pub fn sandwich_construct(f: &LogConcaveFunction, opts: &CheckOptions) -> Result<SandwichRecord> {
    let d = f.dim();
    check_dim(d)?;
    let df = d as f64;
    let c = (df / (df + 1.0)).sqrt();
    let factor = (df + 1.0).sqrt();
    let rate = 1.0 / (df + 2.0);
    let offset = df + 1.0;
    let position = AffinePosition::new(factor, Matrix::identity(d, d) / c, Vector::zeros(d))?;
    let ft = LogConcaveFunction::positioned(f.clone(), position.clone())?;

    // Left: min of f~ on the closed unit ball, boundary included.
    let mut pts = ball_grid(d, 1.0, match d {
        1 => 2001,
        2 => 20_000,
        _ => 40_000,
    });
    pts.extend(sphere_directions(d, 256 * d, opts.seed).into_iter().map(|u| u * (1.0 - 1e-9)));
    let mut min_value = f64::INFINITY;
    let mut witness = Vector::zeros(d);
    for x in &pts {
        let v = ft.value(x);
        if v < min_value {
            min_value = v;
            witness = x.clone();
        }
    }
    let left = LowerBoundCertificate {
        bound: 1.0,
        min_value,
        witness: witness.iter().copied().collect(),
        points_checked: pts.len(),
        passed: min_value >= 1.0 - POLAR_TOL,
    };

    // Tail: f(x) <= e^{d+1} e^{-|x|/(d+1)} from the polar floor on the sphere
    // of radius 1/(d+1); for f~ the envelope decays at c/(d+1) > 1/(d+2).
    let surplus = c / (df + 1.0) - rate;
    let r_star = 1.0 / surplus;
    let mut polar_sphere_min = f64::INFINITY;
    for u in sphere_directions(d, 256 * d, opts.seed ^ 1) {
        polar_sphere_min = polar_sphere_min.min(polar_eval(f, &(u / (df + 1.0)))?.value);
    }
    // f(y) <= e^{-<p,y>} / f°(p) with p = y/((d+1)|y|).
    let envelope_log_const = -polar_sphere_min.ln();
    let log_margin = factor.ln() + envelope_log_const - c * r_star / (df + 1.0) - log_envelope(&(unit(d, 0) * r_star), factor, rate, offset);
    let tail = TailCertificate {
        r_star,
        rate_surplus: surplus,
        polar_sphere_min,
        log_margin_at_r_star: log_margin,
        passed: surplus > 0.0 && polar_sphere_min >= (-(df + 1.0)).exp() - POLAR_TOL && log_margin <= 0.0,
    };

    // Right: f~ below the envelope on the ball of radius r_star.
    let env = EnvelopeFn { d, factor, rate, offset };
    let right = check_envelope(&ft, &env, r_star, opts)?;
    let passed = left.passed && right.passed && tail.passed;
    Ok(SandwichRecord {
        dimension: d,
        position,
        left_floor: 1.0,
        right_envelope: format!("√{}·e^{{−|x|/{}+{}}}", d + 1, d + 2, d + 1),
        right_factor: factor,
        right_rate: rate,
        right_offset: offset,
        left,
        right,
        tail,
        passed,
    })
}

struct EnvelopeFn {
    d: usize,
    factor: f64,
    rate: f64,
    offset: f64,
}

/// Lattice scan of `log f~ - log envelope` on a ball (the envelope is not
/// log-concave-smooth at the origin, so this is a plain scan plus ascent
/// on `f~` alone near the worst point).
fn check_envelope(ft: &LogConcaveFunction, env: &EnvelopeFn, radius: f64, opts: &CheckOptions) -> Result<DominationCertificate> {
    let d = env.d;
    let nodes = match d {
        1 => 40_001,
        2 => 301,
        3 => 51,
        _ => opts.nodes(d),
    };
    let mut best = f64::NEG_INFINITY;
    let mut witness = Vector::zeros(d);
    let mut count = 0;
    let mut pts = vec![Vector::zeros(d)];
    pts.extend(ball_lattice(d, radius, nodes));
    for x in pts {
        count += 1;
        let lf = ft.log_value(&x);
        if lf == f64::NEG_INFINITY {
            continue;
        }
        let v = lf - log_envelope(&x, env.factor, env.rate, env.offset);
        if v > best + 1e-12 * best.abs().max(1.0) || best == f64::NEG_INFINITY {
            best = v;
            witness = x;
        }
    }
    let lattice_best = best;
    let mut r = rng(opts.seed);
    for _ in 0..opts.starts {
        let mut x = random_in_ball(d, radius, &mut r);
        let val = |x: &Vector| ft.log_value(x) - log_envelope(x, env.factor, env.rate, env.offset);
        let mut v = val(&x);
        count += 1;
        let mut step = 0.05 * radius;
        for _ in 0..60 {
            if !v.is_finite() {
                break;
            }
            let n = x.norm();
            let mut grad = ft.log_grad(&x);
            if n > 0.0 {
                grad += &x * (env.rate / n);
            }
            let gn = grad.norm();
            if gn < 1e-14 {
                break;
            }
            let mut cand = &x + &grad * (step / gn);
            project_ball(&mut cand, radius);
            let vc = val(&cand);
            count += 1;
            if vc > v {
                x = cand;
                v = vc;
                step *= 1.5;
            } else {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
        }
        if v.is_finite() && v > best + 1e-12 * best.abs().max(1.0) {
            best = v;
            witness = x;
        }
    }
    Ok(DominationCertificate {
        max_log_violation: best,
        witness: witness.iter().copied().collect(),
        points_checked: count,
        refined: best > lattice_best,
        seed: opts.seed,
        passed: best <= DOMINATION_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LownerKind {
    ExpNorm { p: f64 },
    PolarHeightPower { s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LownerRecord {
    pub kind: LownerKind,
    pub dimension: usize,
    pub probe_t: Vec<f64>,
    /// `(L_+)°(-t e_1)`, all equal to `1`.
    pub probe_values: Vec<f64>,
    pub probe_passed: bool,
    /// `(L_+)°(+t e_1)`, decaying to `0`.
    pub control_values: Vec<f64>,
    /// `L_+ <= L`.
    pub domination: DominationCertificate,
    pub samples: usize,
    /// Smallest `integral(G) / integral(L)` over the sampled feasible positions `G`.
    pub min_integral_ratio: f64,
    pub minimality_passed: bool,
    /// `L_+(t u) <= G(t u)` at `t = 1000` along random directions of the half-space.
    pub far_field_passed: bool,
    pub passed: bool,
}

fn lowner_base(kind: LownerKind, d: usize) -> Result<LogConcaveFunction> {
    match kind {
        LownerKind::ExpNorm { p } => {
            if !(p >= 1.0) {
                return Err(Error::InvalidParameter(format!("p must be at least 1, got {p}")));
            }
            LogConcaveFunction::exp_norm(d, p)
        }
        LownerKind::PolarHeightPower { s } => LogConcaveFunction::polar_height_power(d, s),
    }
}

/// `sup_{x_1 >= 0} log L(x) - log L(B^{-1}(x - b))` by lattice and ascent.
fn lift_needed(l: &LogConcaveFunction, b_inv: &Matrix, shift: &Vector, seed: u64) -> f64 {
    let d = l.dim();
    let val = |x: &Vector| l.log_value(x) - l.log_value(&(b_inv * (x - shift)));
    let clamp = |x: &mut Vector| {
        if x[0] < 0.0 {
            x[0] = 0.0;
        }
    };
    let reach = 4.0 + 4.0 * shift.norm();
    let mut best = f64::NEG_INFINITY;
    let mut starts = vec![Vector::zeros(d), shift.clone()];
    let mut r = rng(seed);
    for _ in 0..24 {
        let mut x = random_in_ball(d, reach, &mut r);
        clamp(&mut x);
        starts.push(x);
    }
    for mut x in starts {
        clamp(&mut x);
        let mut v = val(&x);
        let mut step = 0.1;
        for _ in 0..200 {
            let g = l.log_grad(&x) - b_inv.transpose() * l.log_grad(&(b_inv * (&x - shift)));
            let gn = g.norm();
            if gn < 1e-13 {
                break;
            }
            let mut cand = &x + &g * (step / gn);
            clamp(&mut cand);
            let vc = val(&cand);
            if vc > v {
                x = cand;
                v = vc;
                step *= 1.5;
            } else {
                step *= 0.5;
                if step < 1e-13 {
                    break;
                }
            }
        }
        best = best.max(v);
    }
    best
}

/// The Löwner counterexample: `L_+ = L` restricted to `{x_1 >= 0}` has a
/// polar that is not proper, while `L` itself is the minimal-integral
/// position above `L_+` among the sampled ones.
pub fn lowner_counterexample(kind: LownerKind, d: usize, opts: &CheckOptions) -> Result<LownerRecord> {
    check_dim(d)?;
    let l = lowner_base(kind, d)?;
    let e1 = unit(d, 0);
    let lp = LogConcaveFunction::half_restriction(l.clone(), e1.clone())?;
    let probe_t = vec![1.0, 2.0, 5.0, 10.0];
    let probe_values = improperness_probe(&lp, &(-&e1), &probe_t)?;
    let probe_passed = probe_values.iter().all(|v| (v - 1.0).abs() <= 1e-9);
    let control_values = improperness_probe(&lp, &e1, &probe_t)?;
    let domination = check_domination(&lp, &l, 5.0, opts)?;

    // Random positions beta * L(B^{-1}(x - b)), pushed to feasibility:
    // eigenvalues of B at least 1, the shift moved onto the ray t e_1 with
    // t >= 0, and beta raised to the smallest feasible value.
    let samples = 200;
    let mut r = rng(opts.seed);
    let mut min_ratio = f64::INFINITY;
    let mut far_ok = true;
    for k in 0..samples {
        let mut pert = Matrix::from_fn(d, d, |_, _| 0.4 * (r.random::<f64>() - 0.5));
        pert = symmetrize(&pert);
        let eig = (Matrix::identity(d, d) + pert).symmetric_eigen();
        let clipped = eig.eigenvalues.map(|v| v.max(1.0));
        let b = &eig.eigenvectors * Matrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
        let b = symmetrize(&b);
        let b_inv = b.clone().try_inverse().ok_or(Error::SingularMatrix { det: b.determinant() })?;
        let shift = &e1 * (0.5 * r.random::<f64>()).max(0.0);
        let beta0 = 1.0 + 0.5 * r.random::<f64>();
        let need = lift_needed(&l, &b_inv, &shift, opts.seed.wrapping_add(k as u64)).exp() * (1.0 + 1e-9);
        let beta = beta0.max(need);
        let g = LogConcaveFunction::positioned(l.clone(), AffinePosition::new(beta, b.clone(), shift.clone())?)?;
        min_ratio = min_ratio.min(beta * b.determinant());
        for _ in 0..(64 / samples).max(1) {
            let mut u = random_unit(d, &mut r);
            u[0] = u[0].abs();
            let x = u * 1e3;
            if lp.log_value(&x) > g.log_value(&x) + 1e-9 {
                far_ok = false;
            }
        }
    }
    // Directions for the far-field check, independent of the samples.
    let mut r2 = rng(opts.seed ^ 0xfa);
    for _ in 0..64 {
        let mut u = random_unit(d, &mut r2);
        u[0] = u[0].abs();
        let x = u * 1e3;
        if lp.log_value(&x) > l.log_value(&x) + 1e-9 {
            far_ok = false;
        }
    }
    let minimality_passed = min_ratio >= 1.0 - 1e-6;
    let passed = probe_passed && domination.passed && minimality_passed && far_ok;
    Ok(LownerRecord {
        kind,
        dimension: d,
        probe_t,
        probe_values,
        probe_passed,
        control_values,
        domination,
        samples,
        min_integral_ratio: min_ratio,
        minimality_passed,
        far_field_passed: far_ok,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn two_point_bump() -> LogConcaveFunction {
        LogConcaveFunction::bump(&[vector(&[FRAC_1_SQRT_2]), vector(&[-FRAC_1_SQRT_2])]).unwrap()
    }

    #[test]
    fn domination_examples() {
        let h = LogConcaveFunction::height(1).unwrap();
        let o = CheckOptions::default();
        assert!(check_domination(&h, &two_point_bump(), 1.0, &o).unwrap().passed);
        let big = h.clone().scaled(1.01).unwrap();
        let c = check_domination(&big, &h, 1.0, &o).unwrap();
        assert!(!c.passed);
        assert!((c.max_log_violation - 1.01_f64.ln()).abs() < 1e-12);
        assert!(c.witness[0].abs() < 1e-6);
        let same = check_domination(&h, &h, 1.0, &o).unwrap();
        assert_eq!(same.max_log_violation, 0.0);
    }

    #[test]
    fn two_point_inclusion() {
        let rec = john_inclusion_check(&two_point_bump(), &CheckOptions::default()).unwrap();
        assert!(rec.passed && rec.john_position_certified);
        assert!(rec.polar_floor.min_value >= (-2.0_f64).exp());
        let ten = LogConcaveFunction::height(1).unwrap().scaled(10.0).unwrap();
        let rec = john_inclusion_check(&ten, &CheckOptions::default()).unwrap();
        assert!(rec.height_below.passed);
        assert!(!rec.john_position_certified);
    }

    #[test]
    fn sandwich_d1_constants() {
        let rec = sandwich_construct(&two_point_bump(), &CheckOptions::default()).unwrap();
        assert!(rec.passed, "{rec:?}");
        assert_eq!(rec.left_floor, 1.0);
        assert_eq!(rec.right_envelope, "√2·e^{−|x|/3+2}");
        assert!((rec.right_factor - SQRT_2).abs() < 1e-15);
        assert!(rec.tail.r_star <= 40.0 * 3.0);
    }

    #[test]
    fn sandwich_height_touches_floor() {
        for d in 1..=3 {
            let h = LogConcaveFunction::height(d).unwrap();
            let rec = sandwich_construct(&h, &CheckOptions::default()).unwrap();
            assert!(rec.left.passed);
            assert!((rec.left.min_value - 1.0).abs() < 1e-4, "{}", rec.left.min_value);
        }
    }

    #[test]
    fn constant_check_all_dimensions() {
        for d in 1..=8 {
            let df = d as f64;
            assert!((df / (df + 1.0)).sqrt() / (df + 1.0) > 1.0 / (df + 2.0));
        }
    }

    #[test]
    fn lowner_gaussian() {
        let rec = lowner_counterexample(LownerKind::ExpNorm { p: 2.0 }, 1, &CheckOptions::default()).unwrap();
        assert!(rec.passed, "{rec:?}");
        assert!(rec.control_values[3] < 1e-10);
    }
}
