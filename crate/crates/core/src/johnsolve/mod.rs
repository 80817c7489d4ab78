//! The Functional John problem: the largest-integral position
//! `alpha w(A^{-1}(x - a))` of a reference function `w` lying below `f`.
//! The fixed-height variant drives the height curve; contact extraction
//! certifies a solution.
//!
//! Positions are searched over symmetric positive definite `A`. Log-affine
//! and half-space pieces of `f` enter as exact constraints over the whole
//! support of `w`; smooth pieces are handled by cutting planes on sample
//! points, found by multi-start ascent of `log g - log f`.

mod barrier;
mod reference;
mod report;
mod solver;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::weights_from_points;
use crate::error::{Error, Result};
use crate::lcfunc::{LogConcaveFunction, LogPiece};
use crate::linalg::{expect_dim, hbar_from_sq, lex_cmp, vech, Vector};
use crate::position::AffinePosition;
use crate::sampling::{ball_grid, sphere_directions};

use barrier::{Constraint, Problem};
use reference::Reference;
pub use report::{SolveDiagnostics, SolveReport};

/// Knobs of the solver. `grid_density = 0` picks the per-axis lattice
/// size automatically (about `10^6` certification points for `d <= 3`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub seed: u64,
    pub restarts: usize,
    pub grid_density: usize,
    pub constraint_tol: f64,
    pub step_tol: f64,
    pub max_outer_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            seed: 0,
            restarts: 16,
            grid_density: 0,
            constraint_tol: 1e-8,
            step_tol: 1e-10,
            max_outer_iterations: 200,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_outer_iterations == 0 {
            return Err(Error::InvalidParameter("restarts and max_outer_iterations must be at least 1".into()));
        }
        if !(self.constraint_tol > 0.0) || !(self.step_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn lattice_density(&self, d: usize) -> usize {
        if self.grid_density > 0 {
            return self.grid_density;
        }
        match d {
            1 | 2 => 1000,
            _ => ((1e6_f64).powf(1.0 / d as f64).floor() as usize).max(3),
        }
    }
}

fn setup(f: &LogConcaveFunction, w: &LogConcaveFunction, pinned: Option<f64>) -> Result<Problem> {
    expect_dim(f.dim(), w.dim())?;
    let reference = Reference::from_function(w)?;
    let peak = f.argmax()?;
    let mut prob = Problem::new(f, reference, pinned, peak.clone());
    prob.anchor = prob.interior_point(peak)?;
    Ok(prob)
}

/// Picks the best restart: largest objective, ties broken by the
/// lexicographically smallest `(alpha, vec A, a)`.
fn better(prob: &Problem, a: &[f64], b: &[f64]) -> bool {
    let (oa, ob) = (prob.objective(a), prob.objective(b));
    let tie = 1e-12 * (1.0 + oa.abs().max(ob.abs()));
    if (oa - ob).abs() > tie {
        return oa > ob;
    }
    let key = |th: &[f64]| {
        let m = prob.layout.matrix(th);
        let mut k = vec![th[0].exp()];
        k.extend(m.iter());
        k.extend(prob.layout.shift(th).iter());
        k
    };
    lex_cmp(&key(a), &key(b)).is_lt()
}

fn solve_problem(prob: &Problem, opts: &SolverOptions, warm: Option<&[f64]>) -> Result<SolveReport> {
    opts.validate()?;
    let runs: Vec<Result<solver::RunOutcome>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let seed = opts.seed.wrapping_mul(1_000_003).wrapping_add(r as u64);
            let start = match (r, warm) {
                (0, Some(th)) => th.to_vec(),
                _ => solver::restart_start(prob, r, opts.seed),
            };
            prob.run(&start, opts, seed)
        })
        .collect();
    let mut best: Option<solver::RunOutcome> = None;
    let mut first_err = None;
    let mut total = SolveDiagnostics::default();
    for run in runs {
        match run {
            Ok(out) => {
                total.outer_iterations += out.diagnostics.outer_iterations;
                total.newton_iterations += out.diagnostics.newton_iterations;
                let take = match &best {
                    None => true,
                    Some(b) => {
                        (out.diagnostics.converged && !b.diagnostics.converged)
                            || (out.diagnostics.converged == b.diagnostics.converged && better(prob, &out.theta, &b.theta))
                    }
                };
                if take {
                    best = Some(out);
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some(mut run) = best else {
        return Err(first_err.unwrap_or_else(|| Error::Infeasible("no restart produced a position".into())));
    };
    let own_newton = run.diagnostics.newton_iterations;

    // Certification, with further cuts if the grid finds something the
    // separation oracle missed.
    let d = prob.dim();
    let density = opts.lattice_density(d);
    let starts = 64 * opts.restarts;
    let cert_seed = opts.seed ^ 0x5eed_cafe;
    let mut cert = prob.certify(&run.theta, density, starts, cert_seed);
    let mut rounds = 0;
    while cert.max_violation > opts.constraint_tol
        && !prob.smooth.is_empty()
        && rounds < 10
        && run.diagnostics.outer_iterations < opts.max_outer_iterations
    {
        rounds += 1;
        let y = cert.witness.clone();
        let (cw, _) = prob.reference.support_ball();
        let dir = &y - &cw;
        for k in 0..prob.smooth.len() {
            run.constraints.push(Constraint::Value { piece: k, y: y.clone() });
            if prob.smooth[k].ellipsoid.is_some() && dir.norm() > 0.0 {
                run.constraints.push(Constraint::Contain {
                    piece: k,
                    z: &dir / dir.norm(),
                });
            }
        }
        run.theta = prob.restore(&run.theta, &run.constraints)?;
        prob.barrier_solve(&mut run.theta, &run.constraints, 1.0, &mut run.diagnostics.newton_iterations);
        run.diagnostics.outer_iterations += 1;
        cert = prob.certify(&run.theta, density, starts, cert_seed);
    }
    let mut violation = cert.max_violation;
    if prob.pinned.is_none() && violation.is_finite() && violation > 0.0 {
        run.theta[0] -= violation;
        violation = 0.0;
    }
    if prob.pinned.is_none() && run.theta[0].exp() < barrier::MIN_ALPHA {
        return Err(Error::Infeasible(format!("height {:e} below 1e-12", run.theta[0].exp())));
    }

    let mut diag = run.diagnostics;
    diag.restarts = opts.restarts;
    diag.outer_iterations = diag.outer_iterations.max(1);
    diag.newton_iterations = total.newton_iterations + diag.newton_iterations - own_newton;
    diag.max_violation = violation;
    diag.certification_points = cert.points;
    diag.constraint_points = run.constraints.len();
    let objective = prob.objective(&run.theta);
    if let Some(last) = diag.objective_trace.last().copied() {
        if objective > last {
            diag.objective_trace.push(objective);
        }
    }
    let position = AffinePosition::positive(run.theta[0].exp(), prob.layout.matrix(&run.theta), prob.layout.shift(&run.theta))?;
    let report = SolveReport {
        position,
        objective,
        feasible: violation <= opts.constraint_tol,
        contacts: vec![],
        recovered_weights: None,
        nnls_residual: None,
        positive_definite_restriction: true,
        pinned_alpha: prob.pinned.map(f64::exp),
        diagnostics: diag,
    };
    if !report.diagnostics.converged {
        return Err(Error::NotConverged {
            iterations: opts.max_outer_iterations,
            report: Box::new(report),
        });
    }
    Ok(report)
}

/// Largest-integral positive-definite position of `w` below `f`.
///
/// `w` must be a height power or a ball indicator. The result is a
/// certified feasible point (checked on a lattice plus multi-start ascent),
/// not a certificate of global optimality.
pub fn solve_john(f: &LogConcaveFunction, w: &LogConcaveFunction, opts: &SolverOptions) -> Result<SolveReport> {
    let prob = setup(f, w, None)?;
    solve_problem(&prob, opts, None)
}

fn fixed_height_problem(f: &LogConcaveFunction, w: &LogConcaveFunction, xi: f64) -> Result<Problem> {
    let sup_f = f.sup_norm()?;
    if !(xi > 0.0) || xi > sup_f * (1.0 + 1e-12) {
        return Err(Error::OutOfDomain {
            value: xi,
            domain: "(0, sup f]",
        });
    }
    // At `xi = sup f` the feasible set has empty interior; pin just below.
    let xi_eff = xi.min(sup_f * (1.0 - 1e-9));
    setup(f, w, Some(xi_eff.ln()))
}

/// As [`solve_john`] with the height pinned to `xi` (`sup w = 1` for every
/// accepted `w`).
pub fn solve_fixed_height(f: &LogConcaveFunction, w: &LogConcaveFunction, xi: f64, opts: &SolverOptions) -> Result<SolveReport> {
    let prob = fixed_height_problem(f, w, xi)?;
    let mut report = solve_problem(&prob, opts, None)?;
    report.pinned_alpha = Some(xi);
    Ok(report)
}

/// One sample of the height curve `Psi(alpha) = det A_alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub alpha: f64,
    pub t: f64,
    pub psi: f64,
    pub phi: f64,
    pub feasible: bool,
    pub max_violation: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightCurve {
    /// In the order of the requested heights.
    pub records: Vec<CurveRecord>,
    /// Largest amount by which `Phi(t)` falls below a chord through its
    /// neighbours (sorted by `t`); `<= 0` for a concave sample.
    pub max_concavity_defect: f64,
    /// Indices (into `records`) of the midpoints whose defect exceeds `1e-6`.
    pub concavity_violations: Vec<usize>,
}

impl HeightCurve {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["alpha", "t", "psi", "phi", "feasible", "max_violation"])
            .map_err(|e| Error::Config(e.to_string()))?;
        for r in &self.records {
            wtr.write_record([
                r.alpha.to_string(),
                r.t.to_string(),
                r.psi.to_string(),
                r.phi.to_string(),
                r.feasible.to_string(),
                r.max_violation.to_string(),
            ])
            .map_err(|e| Error::Config(e.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Samples `Psi` and `Phi = Psi^{1/d}` at the given heights, solving in
/// decreasing order of `alpha` and warm-starting each solve from the
/// previous one. Per-sample failures are recorded and the curve continues.
pub fn height_curve(f: &LogConcaveFunction, w: &LogConcaveFunction, alphas: &[f64], opts: &SolverOptions) -> Result<HeightCurve> {
    expect_dim(f.dim(), w.dim())?;
    let d = f.dim();
    let mut order: Vec<usize> = (0..alphas.len()).collect();
    order.sort_by(|&i, &j| alphas[j].total_cmp(&alphas[i]));
    let mut records: Vec<Option<CurveRecord>> = vec![None; alphas.len()];
    let mut previous: Option<Vec<f64>> = None;
    for &i in &order {
        let alpha = alphas[i];
        let outcome = fixed_height_problem(f, w, alpha).and_then(|prob| {
            let warm = previous.as_ref().map(|th| {
                let mut th = th.clone();
                th[0] = prob.pinned.unwrap_or(th[0]);
                th
            });
            let rep = solve_problem(&prob, opts, warm.as_deref())?;
            Ok((prob.layout.pack(rep.position.alpha().ln(), rep.position.matrix(), rep.position.shift()), rep))
        });
        let rec = match outcome {
            Ok((th, rep)) => {
                previous = Some(th);
                let psi = rep.position.det();
                CurveRecord {
                    alpha,
                    t: alpha.ln(),
                    psi,
                    phi: psi.powf(1.0 / d as f64),
                    feasible: rep.feasible,
                    max_violation: rep.diagnostics.max_violation,
                    error: None,
                }
            }
            Err(e) => CurveRecord {
                alpha,
                t: alpha.ln(),
                psi: f64::NAN,
                phi: f64::NAN,
                feasible: false,
                max_violation: f64::NAN,
                error: Some(e.to_string()),
            },
        };
        records[i] = Some(rec);
    }
    let records: Vec<CurveRecord> = records.into_iter().map(|r| r.expect("every height visited")).collect();
    let (max_concavity_defect, concavity_violations) = concavity_defects(&records, 1e-6);
    Ok(HeightCurve {
        records,
        max_concavity_defect,
        concavity_violations,
    })
}

/// Defect of `Phi` below the chord of its two neighbours in `t`.
pub fn concavity_defects(records: &[CurveRecord], tol: f64) -> (f64, Vec<usize>) {
    let mut idx: Vec<usize> = (0..records.len()).filter(|&i| records[i].phi.is_finite()).collect();
    idx.sort_by(|&i, &j| records[i].t.total_cmp(&records[j].t));
    let mut worst = f64::NEG_INFINITY;
    let mut flagged = vec![];
    for w in idx.windows(3) {
        let (a, b, c) = (&records[w[0]], &records[w[1]], &records[w[2]]);
        if c.t == a.t {
            continue;
        }
        let lam = (c.t - b.t) / (c.t - a.t);
        let chord = lam * a.phi + (1.0 - lam) * c.phi;
        let defect = chord - b.phi;
        worst = worst.max(defect);
        if defect > tol {
            flagged.push(w[1]);
        }
    }
    (worst, flagged)
}

/// Contact points of `f` with the height function: interior points where
/// `f(u) - h(u) <= contact_tol * h(u)` and unit vectors on the boundary of
/// a bounded `supp f`.
pub fn find_contacts(f: &LogConcaveFunction, contact_tol: f64) -> Vec<Vector> {
    let d = f.dim();
    let touches = |u: &Vector| {
        let n2 = u.norm_squared();
        if n2 >= 1.0 {
            return false;
        }
        let h = hbar_from_sq(n2);
        f.value(u) - h <= contact_tol * h
    };
    let mut found: Vec<Vector> = vec![];
    let push = |u: Vector, found: &mut Vec<Vector>| {
        if !found.iter().any(|v| (v - &u).norm() < 1e-7) {
            found.push(u);
        }
    };
    // Exact tangency points of log-affine pieces.
    for p in f.pieces() {
        if let LogPiece::Affine { slope, .. } = p {
            let s = slope.norm();
            let u = if s == 0.0 {
                Vector::zeros(d)
            } else {
                -&slope * (2.0 / (1.0 + (1.0 + 4.0 * s * s).sqrt()))
            };
            if touches(&u) {
                push(u, &mut found);
            }
        }
    }
    // Grid screening with local refinement of the gap `log f - log h`.
    let target = match d {
        1 => 4001,
        2 => 20_000,
        _ => 40_000,
    };
    // Descent stalls near a kink a little short of the tangency point, so
    // refined hits are merged within the width of the contact tolerance.
    let merge = contact_tol.sqrt().max(1e-6);
    let mut grid_hits = vec![];
    for u in ball_grid(d, 1.0 - 1e-9, target) {
        let n2 = u.norm_squared();
        if n2 >= 1.0 {
            continue;
        }
        let h = hbar_from_sq(n2);
        if f.value(&u) / h - 1.0 <= 1e3 * contact_tol.max(1e-9) {
            let r = refine_contact(f, u);
            if touches(&r) && !grid_hits.iter().any(|v: &Vector| (v - &r).norm() < merge) {
                grid_hits.push(r);
            }
        }
    }
    for u in spread_subset(grid_hits, 256) {
        if !found.iter().any(|v| (v - &u).norm() < merge) {
            push(u, &mut found);
        }
    }
    // Boundary of a bounded support.
    if f.support_ellipsoid().is_some() || f.pieces().iter().any(|p| matches!(p, LogPiece::HalfSpace { .. })) {
        let count = match d {
            1 => 2,
            2 => 64,
            _ => 200,
        };
        let mut dirs = sphere_directions(d, count, 0);
        for p in f.pieces() {
            if let LogPiece::HalfSpace { normal, .. } = p {
                let n = normal.norm();
                if (n - 1.0).abs() < 1e-12 {
                    dirs.push(normal / n);
                }
            }
        }
        for u in dirs {
            if f.value(&u) == 0.0 && f.value(&(&u * (1.0 - 1e-9))) > 0.0 {
                push(u, &mut found);
            }
        }
    }
    found
}

/// Gradient descent on `log f - log h` from `u`, staying in the ball.
fn refine_contact(f: &LogConcaveFunction, mut u: Vector) -> Vector {
    let gap = |u: &Vector| {
        let n2 = u.norm_squared();
        if n2 >= 1.0 {
            f64::INFINITY
        } else {
            f.log_value(u) - 0.5 * (1.0 - n2).ln()
        }
    };
    let mut g0 = gap(&u);
    let mut step = 0.01;
    for _ in 0..100 {
        let n2 = u.norm_squared();
        let grad = f.log_grad(&u) + &u / (1.0 - n2);
        let mut moved = false;
        for _ in 0..30 {
            let cand = &u - &grad * step;
            let gc = gap(&cand);
            if gc < g0 {
                u = cand;
                g0 = gc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
        step *= 2.0;
    }
    u
}

/// Deterministic farthest-point subset of at most `cap` points.
fn spread_subset(points: Vec<Vector>, cap: usize) -> Vec<Vector> {
    if points.len() <= cap {
        return points;
    }
    let mut chosen = vec![0usize];
    let mut dist: Vec<f64> = points.iter().map(|p| (p - &points[0]).norm()).collect();
    while chosen.len() < cap {
        let (k, _) = dist
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty");
        chosen.push(k);
        for (i, p) in points.iter().enumerate() {
            dist[i] = dist[i].min((p - &points[k]).norm());
        }
    }
    chosen.into_iter().map(|i| points[i].clone()).collect()
}

/// Finds contacts of `f` with the height function and fits decomposition
/// weights to them. Requires a feasible report whose position is the
/// identity, i.e. `f` already in John coordinates.
pub fn extract_and_certify(f: &LogConcaveFunction, report: &SolveReport, contact_tol: f64) -> Result<SolveReport> {
    if !report.feasible {
        return Err(Error::Precondition("report is not feasible".into()));
    }
    let d = f.dim();
    expect_dim(d, report.position.dim())?;
    let id = AffinePosition::identity(d);
    let off = report.position.max_entry_diff(&id);
    if off > 1e-3 {
        return Err(Error::Precondition(format!(
            "position differs from the identity by {off:e}; transform f into John coordinates first"
        )));
    }
    let contacts = find_contacts(f, contact_tol);
    if contacts.is_empty() {
        return Err(Error::NoContacts);
    }
    let mut out = report.clone();
    out.contacts = contacts.iter().map(|u| u.iter().copied().collect()).collect();
    match weights_from_points(&contacts, 1e-6) {
        Ok(fit) => {
            out.recovered_weights = Some(fit.weights);
            out.nnls_residual = Some(fit.residual);
        }
        Err(Error::InfeasibleWeights { residual, .. }) => {
            out.recovered_weights = None;
            out.nnls_residual = Some(residual);
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// `f` expressed in the coordinates of a solved position:
/// `f(A y + a) / alpha`, whose John position is the identity when the
/// report is optimal.
pub fn to_john_coordinates(f: &LogConcaveFunction, report: &SolveReport) -> Result<LogConcaveFunction> {
    let inv = report.position.invert();
    LogConcaveFunction::positioned(f.clone(), inv)
}

/// Parameter vector `(alpha, vech A, a)` of a report, for comparisons.
pub fn position_parameters(report: &SolveReport) -> Vec<f64> {
    let p = &report.position;
    let mut v = vec![p.alpha()];
    v.extend(vech(p.matrix()));
    v.extend(p.shift().iter());
    v
}

#[cfg(test)]
mod tests;
