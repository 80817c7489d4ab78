//! Cutting-plane outer loop: barrier solves over a growing sample set,
//! separation by multi-start ascent, and the final certification pass.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{unit, Matrix, Vector};
use crate::sampling::{random_in_ball, rng, sphere_directions};

use super::barrier::{Constraint, Parts, Problem};
use super::report::SolveDiagnostics;
use super::SolverOptions;

const ASCENT_ITERS: usize = 200;
const CERT_ASCENT_ITERS: usize = 60;
const DEDUPE: f64 = 1e-9;

/// Largest value of `log g - log f` found, with where it was found.
#[derive(Debug, Clone)]
pub(crate) struct Certification {
    pub max_violation: f64,
    pub witness: Vector,
    pub points: usize,
}

/// Outcome of one restart.
#[derive(Debug, Clone)]
pub(crate) struct RunOutcome {
    pub theta: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub diagnostics: SolveDiagnostics,
}

impl Problem {
    /// Pushes `x` off the walls of `supp f`.
    pub(crate) fn interior_point(&self, mut x: Vector) -> Result<Vector> {
        for _ in 0..200 {
            let mut moved = false;
            let step = 1e-6 * (1.0 + x.norm());
            for (n, b) in &self.halfspaces {
                let nn = n.norm();
                if b - n.dot(&x) < step * nn {
                    x -= n * (step / nn);
                    moved = true;
                }
            }
            for p in &self.smooth {
                if let Some((c, minv)) = &p.ellipsoid {
                    if (minv * (&x - c)).norm() > 1.0 - 1e-6 {
                        x = c + (&x - c) * (1.0 - 1e-5);
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        if self.log_f(&x).is_finite() {
            Ok(x)
        } else {
            Err(Error::Infeasible("could not find an interior point of supp f".into()))
        }
    }

    /// Sample points seeding the relaxation for each smooth piece.
    pub(crate) fn initial_cuts(&self) -> Vec<Constraint> {
        let d = self.dim();
        let (cw, rw) = self.reference.support_ball();
        let mut ys = vec![cw.clone()];
        for k in 0..d {
            for r in [0.5, 0.9] {
                ys.push(&cw + unit(d, k) * (r * rw));
                ys.push(&cw - unit(d, k) * (r * rw));
            }
        }
        let dirs = sphere_directions(d, 6 * d, 1);
        let mut radii = vec![0.3, 0.6, 0.85, 0.95];
        if self.reference.closed_support() {
            radii.push(1.0);
        }
        for r in radii {
            for u in &dirs {
                ys.push(&cw + u * (r * rw));
            }
        }
        let mut zs: Vec<Vector> = (0..d).flat_map(|k| [unit(d, k), -unit(d, k)]).collect();
        zs.extend(dirs.iter().cloned());
        let mut out = self.aggregated();
        for (k, p) in self.smooth.iter().enumerate() {
            for y in &ys {
                out.push(Constraint::Value { piece: k, y: y.clone() });
            }
            if p.ellipsoid.is_some() {
                for z in &zs {
                    out.push(Constraint::Contain { piece: k, z: z.clone() });
                }
            }
        }
        out
    }

    fn piece_violation(&self, k: usize, p: &Parts, y: &Vector) -> f64 {
        let lw = self.reference.log_value(y);
        if lw == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let lg = self.smooth[k].func.log_value(&p.map(y));
        if lg == f64::NEG_INFINITY || lg.is_nan() {
            return f64::INFINITY;
        }
        p.s + lw - lg
    }

    /// Local maximization of `s + log w(y) - log g_k(A y + a)` from `y`.
    fn piece_ascent(&self, k: usize, p: &Parts, mut y: Vector, iters: usize) -> (f64, Vector) {
        let g = &self.smooth[k].func;
        self.reference.project(&mut y);
        let mut v = self.piece_violation(k, p, &y);
        let mut step = 0.1;
        for _ in 0..iters {
            if v == f64::INFINITY || v == f64::NEG_INFINITY {
                break;
            }
            let x = p.map(&y);
            let grad = self.reference.log_grad(&y) - &p.a * g.log_grad(&x);
            if grad.norm() < 1e-13 {
                break;
            }
            let mut improved = false;
            let mut trial = step;
            for _ in 0..50 {
                let mut cand = &y + &grad * trial;
                self.reference.project(&mut cand);
                let vc = self.piece_violation(k, p, &cand);
                if vc > v {
                    let moved = (&cand - &y).norm();
                    y = cand;
                    v = vc;
                    improved = moved > 1e-15;
                    break;
                }
                trial *= 0.5;
            }
            if !improved {
                break;
            }
            step = (trial * 2.0).min(10.0);
        }
        (v, y)
    }

    /// Maximizes `|M^{-1}(A(c_w + r_w z) + a - c)|^2 - 1` over unit `z`.
    fn containment_ascent(&self, k: usize, p: &Parts, mut z: Vector) -> (f64, Vector) {
        let (c, minv) = self.smooth[k].ellipsoid.as_ref().expect("bounded support");
        let (cw, rw) = self.reference.support_ball();
        let kmat: Matrix = minv * &p.a * rw;
        let b = minv * (p.map(&cw) - c);
        let val = |z: &Vector| (&b + &kmat * z).norm_squared() - 1.0;
        let mut v = val(&z);
        for _ in 0..200 {
            let gdir = kmat.transpose() * (&b + &kmat * &z);
            let n = gdir.norm();
            if n == 0.0 {
                break;
            }
            let cand = gdir / n;
            let vc = val(&cand);
            if vc <= v + 1e-16 {
                if vc > v {
                    z = cand;
                    v = vc;
                }
                break;
            }
            z = cand;
            v = vc;
        }
        (v, z)
    }

    /// Most violated samples for the smooth pieces at the current iterate.
    pub(crate) fn separate(
        &self,
        th: &[f64],
        warm: &mut [Vec<Vector>],
        seed: u64,
        tol: f64,
    ) -> (f64, Vec<Constraint>) {
        let d = self.dim();
        let p = Parts::new(&self.layout, th);
        let (cw, rw) = self.reference.support_ball();
        let mut g = rng(seed);
        let mut worst = f64::NEG_INFINITY;
        let mut cuts = vec![];
        for k in 0..self.smooth.len() {
            let mut starts = vec![cw.clone()];
            for i in 0..d {
                starts.push(&cw + unit(d, i) * (0.7 * rw));
                starts.push(&cw - unit(d, i) * (0.7 * rw));
            }
            for _ in 0..4 + 2 * d {
                starts.push(&cw + random_in_ball(d, 0.98 * rw, &mut g));
            }
            starts.extend(warm[k].iter().cloned());
            let mut found: Vec<(f64, Vector)> = vec![];
            for y0 in starts {
                let (v, y) = self.piece_ascent(k, &p, y0, ASCENT_ITERS);
                worst = worst.max(v);
                if v > tol && !found.iter().any(|(_, z)| (z - &y).norm() < DEDUPE) {
                    found.push((v, y));
                }
            }
            found.sort_by(|a, b| b.0.total_cmp(&a.0));
            found.truncate(4);
            for (_, y) in &found {
                warm[k].push(y.clone());
                cuts.push(Constraint::Value { piece: k, y: y.clone() });
            }
            if self.smooth[k].ellipsoid.is_some() {
                let mut zstarts: Vec<Vector> = (0..d).flat_map(|i| [unit(d, i), -unit(d, i)]).collect();
                for _ in 0..4 {
                    zstarts.push(crate::linalg::random_unit(d, &mut g));
                }
                let mut best: Option<(f64, Vector)> = None;
                for z0 in zstarts {
                    let (v, z) = self.containment_ascent(k, &p, z0);
                    if best.as_ref().is_none_or(|(b, _)| v > *b) {
                        best = Some((v, z));
                    }
                }
                if let Some((v, z)) = best {
                    if v > 0.0 {
                        worst = worst.max(v);
                        cuts.push(Constraint::Contain { piece: k, z });
                    }
                }
            }
        }
        for w in warm.iter_mut() {
            if w.len() > 16 {
                let drop = w.len() - 16;
                w.drain(..drop);
            }
        }
        (worst, cuts)
    }

    /// One restart of the outer loop from `start`.
    pub(crate) fn run(&self, start: &[f64], opts: &SolverOptions, seed: u64) -> Result<RunOutcome> {
        let mut cons = self.initial_cuts();
        let mut th = self.restore(start, &cons)?;
        let mut diag = SolveDiagnostics::default();
        let mut warm = vec![vec![]; self.smooth.len()];
        let mut best = f64::NEG_INFINITY;
        for outer in 1..=opts.max_outer_iterations {
            diag.outer_iterations = outer;
            self.barrier_solve(&mut th, &cons, 1.0, &mut diag.newton_iterations);
            let (worst, cuts) = self.separate(&th, &mut warm, seed.wrapping_add(outer as u64), opts.constraint_tol);
            let penalized = self.objective(&th) - worst.max(0.0);
            best = best.max(penalized);
            diag.objective_trace.push(best);
            diag.max_violation = worst;
            if worst <= opts.constraint_tol || cuts.is_empty() {
                diag.converged = true;
                break;
            }
            cons.extend(cuts);
            th = self.restore(&th, &cons)?;
        }
        diag.constraint_points = cons.len();
        Ok(RunOutcome {
            theta: th,
            constraints: cons,
            diagnostics: diag,
        })
    }

    /// Grid plus multi-start search for the largest `log g - log f` at `th`.
    pub(crate) fn certify(&self, th: &[f64], density: usize, starts: usize, seed: u64) -> Certification {
        let d = self.dim();
        let p = Parts::new(&self.layout, th);
        let table = YTable::new(self, &p);
        let (cw, rw) = self.reference.support_ball();
        let mut best = f64::NEG_INFINITY;
        let mut witness = cw.clone();
        let mut count = 0usize;
        let mut y = vec![0.0; d];
        let mut x = Vector::zeros(d);
        let mut idx = vec![0usize; d];
        let n = density.max(2);
        let step = 2.0 * rw / (n - 1) as f64;
        let r2 = rw * rw * (1.0 + 1e-12);
        for _ in 0..n.pow(d as u32) {
            let mut dist2 = 0.0;
            for k in 0..d {
                y[k] = cw[k] - rw + step * idx[k] as f64;
                dist2 += (y[k] - cw[k]) * (y[k] - cw[k]);
            }
            if dist2 <= r2 {
                count += 1;
                let v = table.violation(self, &p, &y, &mut x);
                if v > best {
                    best = v;
                    witness = Vector::from_column_slice(&y);
                }
            }
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < n {
                    break;
                }
                *slot = 0;
            }
        }
        let mut g = rng(seed);
        for i in 0..starts {
            let y0 = if i == 0 {
                witness.clone()
            } else {
                &cw + random_in_ball(d, rw, &mut g)
            };
            let (v, yb, evals) = table.ascent(self, &p, y0, CERT_ASCENT_ITERS, &mut x);
            count += evals;
            if v > best {
                best = v;
                witness = yb;
            }
        }
        Certification {
            max_violation: best,
            witness,
            points: count,
        }
    }
}

/// `f`'s pieces rewritten in the coordinates `y` of the reference function.
struct YTable {
    d: usize,
    affine_offsets: Vec<f64>,
    affine_slopes: Vec<f64>,
    half_offsets: Vec<f64>,
    half_normals: Vec<f64>,
}

impl YTable {
    fn new(prob: &Problem, p: &Parts) -> Self {
        let d = prob.dim();
        let mut t = YTable {
            d,
            affine_offsets: vec![],
            affine_slopes: vec![],
            half_offsets: vec![],
            half_normals: vec![],
        };
        for (o, s) in &prob.affine {
            t.affine_offsets.push(o + s.dot(&p.shift));
            t.affine_slopes.extend((&p.a * s).iter());
        }
        for (n, b) in &prob.halfspaces {
            t.half_offsets.push(n.dot(&p.shift) - b);
            t.half_normals.extend((&p.a * n).iter());
        }
        t
    }

    /// `log g(y) - log f(A y + a)` along with the index of the active piece
    /// (`None` for a smooth piece, reported through `smooth_active`).
    fn violation(&self, prob: &Problem, p: &Parts, y: &[f64], x: &mut Vector) -> f64 {
        let lw = prob.reference.log_value_slice(y);
        if lw == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let d = self.d;
        for (k, o) in self.half_offsets.iter().enumerate() {
            let n = &self.half_normals[k * d..(k + 1) * d];
            if o + n.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() > 0.0 {
                return f64::INFINITY;
            }
        }
        let mut lf = f64::INFINITY;
        for (k, o) in self.affine_offsets.iter().enumerate() {
            let s = &self.affine_slopes[k * d..(k + 1) * d];
            lf = lf.min(o + s.iter().zip(y).map(|(a, b)| a * b).sum::<f64>());
        }
        if !prob.smooth.is_empty() {
            for i in 0..d {
                x[i] = p.shift[i] + (0..d).map(|j| p.a[(i, j)] * y[j]).sum::<f64>();
            }
            for piece in &prob.smooth {
                lf = lf.min(piece.func.log_value(x));
            }
        }
        if lf == f64::NEG_INFINITY || lf.is_nan() {
            return f64::INFINITY;
        }
        p.s + lw - lf
    }

    /// Supergradient of `log f` at `A y + a` pulled back to `y`.
    fn pulled_grad(&self, prob: &Problem, p: &Parts, y: &Vector) -> Vector {
        let d = self.d;
        let mut best = f64::INFINITY;
        let mut grad = Vector::zeros(d);
        for (k, o) in self.affine_offsets.iter().enumerate() {
            let s = &self.affine_slopes[k * d..(k + 1) * d];
            let v = o + s.iter().zip(y.iter()).map(|(a, b)| a * b).sum::<f64>();
            if v < best {
                best = v;
                grad = Vector::from_column_slice(s);
            }
        }
        if !prob.smooth.is_empty() {
            let x = p.map(y);
            for piece in &prob.smooth {
                let v = piece.func.log_value(&x);
                if v < best {
                    best = v;
                    grad = &p.a * piece.func.log_grad(&x);
                }
            }
        }
        grad
    }

    fn ascent(&self, prob: &Problem, p: &Parts, mut y: Vector, iters: usize, x: &mut Vector) -> (f64, Vector, usize) {
        prob.reference.project(&mut y);
        let mut v = self.violation(prob, p, y.as_slice(), x);
        let mut evals = 1;
        let mut step = 0.1;
        for _ in 0..iters {
            if !v.is_finite() {
                break;
            }
            let grad = prob.reference.log_grad(&y) - self.pulled_grad(prob, p, &y);
            if grad.norm() < 1e-13 {
                break;
            }
            let mut improved = false;
            let mut trial = step;
            for _ in 0..40 {
                let mut cand = &y + &grad * trial;
                prob.reference.project(&mut cand);
                let vc = self.violation(prob, p, cand.as_slice(), x);
                evals += 1;
                if vc > v {
                    improved = (&cand - &y).norm() > 1e-15;
                    y = cand;
                    v = vc;
                    break;
                }
                trial *= 0.5;
            }
            if !improved {
                break;
            }
            step = (trial * 2.0).min(10.0);
        }
        (v, y, evals)
    }
}

/// Deterministic starting point for restart `r`.
pub(crate) fn restart_start(prob: &Problem, r: usize, seed: u64) -> Vec<f64> {
    let d = prob.dim();
    let scales = [1.0, 0.5, 0.8, 0.3, 0.65];
    let scale = scales[r % scales.len()];
    let mut g = rng(seed ^ (0x9e37_79b9_7f4a_7c15_u64.wrapping_mul(r as u64 + 1)));
    let mut a = Matrix::identity(d, d) * scale;
    if r > 0 {
        for i in 0..d {
            for j in i..d {
                let e = 0.1 * scale * (g.random::<f64>() - 0.5);
                a[(i, j)] += e;
                if i != j {
                    a[(j, i)] += e;
                }
            }
        }
    }
    let s = prob.pinned.unwrap_or(0.0);
    prob.layout.pack(s, &a, &prob.anchor)
}
