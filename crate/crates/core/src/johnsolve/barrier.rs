//! Constraint model and log-barrier Newton method over
//! `theta = (log alpha, vech A, a)`.
//!
//! In these coordinates `log alpha + log det A` is concave and every
//! constraint `log alpha + log w(y) <= log f(A y + a)` is convex, so each
//! relaxation with finitely many sample points is a smooth convex program.

use crate::error::{Error, Result};
use crate::lcfunc::{LogConcaveFunction, LogPiece};
use crate::linalg::{unvech, vech, vech_pairs, Matrix, Vector};

use super::reference::Reference;

/// Path-following parameters.
const BARRIER_GROWTH: f64 = 20.0;
const FINAL_GAP: f64 = 1e-11;
const MAX_NEWTON: usize = 80;
const ARMIJO: f64 = 0.25;
/// `alpha` below this means no position fits.
pub(crate) const MIN_ALPHA: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub d: usize,
    pub nv: usize,
    pub n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Layout {
    pub fn new(d: usize) -> Self {
        let pairs = vech_pairs(d);
        let nv = pairs.len();
        Layout {
            d,
            nv,
            n: 1 + nv + d,
            pairs,
        }
    }

    pub fn pack(&self, s: f64, a: &Matrix, shift: &Vector) -> Vec<f64> {
        let mut th = Vec::with_capacity(self.n);
        th.push(s);
        th.extend(vech(a));
        th.extend(shift.iter());
        th
    }

    pub fn matrix(&self, th: &[f64]) -> Matrix {
        unvech(self.d, &th[1..1 + self.nv])
    }

    pub fn shift(&self, th: &[f64]) -> Vector {
        Vector::from_column_slice(&th[1 + self.nv..])
    }

    /// Derivative of `theta -> A y (+ a)`.
    pub fn jacobian(&self, y: &Vector, with_shift: bool) -> Matrix {
        let mut j = Matrix::zeros(self.d, self.n);
        for (k, &(r, c)) in self.pairs.iter().enumerate() {
            if r == c {
                j[(r, 1 + k)] = y[r];
            } else {
                j[(r, 1 + k)] = y[c];
                j[(c, 1 + k)] = y[r];
            }
        }
        if with_shift {
            for i in 0..self.d {
                j[(i, 1 + self.nv + i)] = 1.0;
            }
        }
        j
    }
}

/// Current iterate unpacked.
pub(crate) struct Parts {
    pub s: f64,
    pub a: Matrix,
    pub shift: Vector,
}

impl Parts {
    pub fn new(layout: &Layout, th: &[f64]) -> Self {
        Parts {
            s: th[0],
            a: layout.matrix(th),
            shift: layout.shift(th),
        }
    }

    pub fn map(&self, y: &Vector) -> Vector {
        &self.a * y + &self.shift
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SmoothPiece {
    pub func: LogConcaveFunction,
    /// Centre and inverse shape of a bounded support `{c + M z : |z| <= 1}`.
    pub ellipsoid: Option<(Vector, Matrix)>,
}

#[derive(Debug, Clone)]
pub(crate) enum Constraint {
    /// Whole log-affine piece, taken over all of `supp w` in closed form.
    Affine(usize),
    /// Whole half-space piece: `A(supp w) + a` inside it.
    HalfSpace(usize),
    /// `log alpha + log w(y) <= log g(A y + a)` at one sample `y`.
    Value { piece: usize, y: Vector },
    /// `A(c_w + r_w z) + a` inside the support ellipsoid of a smooth piece.
    Contain { piece: usize, z: Vector },
}

impl Constraint {
    pub fn depends_on_height(&self) -> bool {
        matches!(self, Constraint::Affine(_) | Constraint::Value { .. })
    }
}

pub(crate) struct Evaluated {
    pub value: f64,
    pub grad: Vector,
    pub hess: Option<Matrix>,
}

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub layout: Layout,
    pub reference: Reference,
    pub affine: Vec<(f64, Vector)>,
    pub halfspaces: Vec<(Vector, f64)>,
    pub smooth: Vec<SmoothPiece>,
    pub pinned: Option<f64>,
    /// A point where `f` is positive and away from the half-space walls;
    /// positions shrink towards it during restoration.
    pub anchor: Vector,
}

impl Problem {
    pub fn new(f: &LogConcaveFunction, reference: Reference, pinned: Option<f64>, anchor: Vector) -> Self {
        let d = f.dim();
        let mut affine = vec![];
        let mut halfspaces = vec![];
        let mut smooth = vec![];
        for p in f.pieces() {
            match p {
                LogPiece::Affine { offset, slope } => affine.push((offset, slope)),
                LogPiece::HalfSpace { normal, bound } => halfspaces.push((normal, bound)),
                LogPiece::Smooth(g) => {
                    let ellipsoid = g
                        .support_ellipsoid()
                        .and_then(|(c, m)| m.try_inverse().map(|inv| (c, inv)));
                    smooth.push(SmoothPiece { func: g, ellipsoid });
                }
            }
        }
        Problem {
            layout: Layout::new(d),
            reference,
            affine,
            halfspaces,
            smooth,
            pinned,
            anchor,
        }
    }

    pub fn dim(&self) -> usize {
        self.layout.d
    }

    /// Constraints that hold exactly over all of `supp w`.
    pub fn aggregated(&self) -> Vec<Constraint> {
        (0..self.affine.len())
            .map(Constraint::Affine)
            .chain((0..self.halfspaces.len()).map(Constraint::HalfSpace))
            .collect()
    }

    /// `log f` at `x`, from the pieces.
    pub fn log_f(&self, x: &Vector) -> f64 {
        let mut best = f64::INFINITY;
        for (n, b) in &self.halfspaces {
            if n.dot(x) > *b {
                return f64::NEG_INFINITY;
            }
        }
        for (o, sl) in &self.affine {
            best = best.min(o + sl.dot(x));
        }
        for p in &self.smooth {
            best = best.min(p.func.log_value(x));
        }
        best
    }

    pub fn objective(&self, th: &[f64]) -> f64 {
        let a = self.layout.matrix(th);
        match a.clone().cholesky() {
            Some(ch) => th[0] + 2.0 * ch.l().diagonal().iter().map(|v| v.ln()).sum::<f64>(),
            None => f64::NEG_INFINITY,
        }
    }

    /// Value (and derivatives) of one constraint; `None` when it is `+inf`.
    pub fn evaluate(&self, c: &Constraint, p: &Parts, derivs: bool) -> Option<Evaluated> {
        let lay = &self.layout;
        let n = lay.n;
        let mut e_s = Vector::zeros(n);
        e_s[0] = 1.0;
        match c {
            Constraint::Affine(k) => {
                let (o, sigma) = &self.affine[*k];
                let q = -(&p.a * sigma);
                let tilt = self.reference.tilt(&q);
                let value = p.s - o - sigma.dot(&p.shift) + tilt.value;
                if !derivs {
                    return Some(Evaluated { value, grad: e_s, hess: None });
                }
                let j = lay.jacobian(sigma, false);
                let mut grad = e_s - j.transpose() * &tilt.argmax;
                for i in 0..lay.d {
                    grad[1 + lay.nv + i] -= sigma[i];
                }
                let hess = j.transpose() * tilt.hessian * &j;
                Some(Evaluated {
                    value,
                    grad,
                    hess: Some(hess),
                })
            }
            Constraint::HalfSpace(k) => {
                let (nrm, b) = &self.halfspaces[*k];
                let (cw, rw) = self.reference.support_ball();
                let v = &p.a * nrm;
                let vn = v.norm();
                let value = nrm.dot(&p.map(&cw)) + rw * vn - b;
                if !derivs {
                    return Some(Evaluated {
                        value,
                        grad: Vector::zeros(n),
                        hess: None,
                    });
                }
                let jc = lay.jacobian(&cw, true);
                let jn = lay.jacobian(nrm, false);
                let mut grad = jc.transpose() * nrm;
                let mut hess = Matrix::zeros(n, n);
                if vn > 0.0 {
                    let vh = &v / vn;
                    grad += jn.transpose() * &vh * rw;
                    let proj = Matrix::identity(lay.d, lay.d) - &vh * vh.transpose();
                    hess = jn.transpose() * proj * &jn * (rw / vn);
                }
                Some(Evaluated {
                    value,
                    grad,
                    hess: Some(hess),
                })
            }
            Constraint::Value { piece, y } => {
                let g = &self.smooth[*piece].func;
                let x = p.map(y);
                let lg = g.log_value(&x);
                let lw = self.reference.log_value(y);
                if lg == f64::NEG_INFINITY || lg.is_nan() {
                    return None;
                }
                let value = p.s + lw - lg;
                if !derivs {
                    return Some(Evaluated { value, grad: e_s, hess: None });
                }
                let j = lay.jacobian(y, true);
                let grad = e_s - j.transpose() * g.log_grad(&x);
                let hess = -(j.transpose() * g.log_hess(&x) * &j);
                Some(Evaluated {
                    value,
                    grad,
                    hess: Some(hess),
                })
            }
            Constraint::Contain { piece, z } => {
                let (ce, minv) = self.smooth[*piece].ellipsoid.as_ref().expect("bounded support");
                let (cw, rw) = self.reference.support_ball();
                let y = cw + z * rw;
                let u = minv * (p.map(&y) - ce);
                let value = u.norm_squared() - 1.0;
                if !derivs {
                    return Some(Evaluated {
                        value,
                        grad: Vector::zeros(n),
                        hess: None,
                    });
                }
                let j = lay.jacobian(&y, true);
                let mj = minv * &j;
                Some(Evaluated {
                    value,
                    grad: mj.transpose() * &u * 2.0,
                    hess: Some(mj.transpose() * &mj * 2.0),
                })
            }
        }
    }

    /// Barrier value `-t (s + log det A) - sum log(-c)`, `None` outside the
    /// strict interior.
    fn barrier_value(&self, th: &[f64], cons: &[Constraint], t: f64) -> Option<f64> {
        let p = Parts::new(&self.layout, th);
        let ch = p.a.clone().cholesky()?;
        let logdet = 2.0 * ch.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let mut phi = -t * (p.s + logdet);
        for c in cons {
            let e = self.evaluate(c, &p, false)?;
            if !(e.value < 0.0) {
                return None;
            }
            phi -= (-e.value).ln();
        }
        Some(phi)
    }

    fn barrier_derivatives(&self, th: &[f64], cons: &[Constraint], t: f64) -> Option<(Vector, Matrix)> {
        let lay = &self.layout;
        let p = Parts::new(lay, th);
        let b = p.a.clone().try_inverse()?;
        let n = lay.n;
        let mut g = Vector::zeros(n);
        let mut h = Matrix::zeros(n, n);
        // -t * objective.
        g[0] = -t;
        let pairs = vech_pairs(lay.d);
        let mut be = Vec::with_capacity(lay.nv);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            g[1 + k] = -t * if i == j { b[(i, i)] } else { 2.0 * b[(i, j)] };
            let mut e = Matrix::zeros(lay.d, lay.d);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            be.push(&b * e);
        }
        for p1 in 0..lay.nv {
            for p2 in p1..lay.nv {
                let tr = (&be[p1] * &be[p2]).trace();
                h[(1 + p1, 1 + p2)] = t * tr;
                h[(1 + p2, 1 + p1)] = t * tr;
            }
        }
        for c in cons {
            let e = self.evaluate(c, &p, true)?;
            if !(e.value < 0.0) {
                return None;
            }
            let inv = -1.0 / e.value;
            g += &e.grad * inv;
            h += &e.grad * e.grad.transpose() * (inv * inv);
            if let Some(hc) = e.hess {
                h += hc * inv;
            }
        }
        Some((g, h))
    }

    fn free_indices(&self) -> std::ops::Range<usize> {
        if self.pinned.is_some() {
            1..self.layout.n
        } else {
            0..self.layout.n
        }
    }

    /// Damped Newton iterations on the barrier at fixed `t`.
    fn center(&self, th: &mut Vec<f64>, cons: &[Constraint], t: f64, newton: &mut usize) {
        let idx = self.free_indices();
        let m = idx.len();
        let off = idx.start;
        let Some(mut phi) = self.barrier_value(th, cons, t) else {
            return;
        };
        for _ in 0..MAX_NEWTON {
            let Some((g, h)) = self.barrier_derivatives(th, cons, t) else {
                return;
            };
            *newton += 1;
            let gs = Vector::from_fn(m, |i, _| g[off + i]);
            let hs = Matrix::from_fn(m, m, |i, j| h[(off + i, off + j)]);
            let Some(dx) = solve_spd(&hs, &gs) else {
                return;
            };
            let slope = gs.dot(&dx);
            if -slope / 2.0 < 1e-12 {
                return;
            }
            let mut step = 1.0;
            let mut moved = false;
            while step > 1e-16 {
                let mut trial = th.clone();
                for i in 0..m {
                    trial[off + i] += step * dx[i];
                }
                if let Some(v) = self.barrier_value(&trial, cons, t) {
                    if v <= phi + ARMIJO * step * slope {
                        *th = trial;
                        phi = v;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                return;
            }
        }
    }

    /// Follows the central path from a strictly feasible point.
    /// Returns the final barrier weight; `t_start` warm-starts the path.
    pub fn barrier_solve(&self, th: &mut Vec<f64>, cons: &[Constraint], t_start: f64, newton: &mut usize) -> f64 {
        let m = (cons.len() + self.layout.d).max(1) as f64;
        let mut t = t_start.max(1.0);
        loop {
            self.center(th, cons, t, newton);
            if m / t < FINAL_GAP {
                break;
            }
            t *= BARRIER_GROWTH;
        }
        t
    }

    /// `theta` with `A -> rho A` and `a -> rho a + (1 - rho) anchor`.
    pub fn shrink(&self, th: &[f64], rho: f64) -> Vec<f64> {
        let lay = &self.layout;
        let mut out = th.to_vec();
        for v in out[1..1 + lay.nv].iter_mut() {
            *v *= rho;
        }
        for i in 0..lay.d {
            out[1 + lay.nv + i] = rho * th[1 + lay.nv + i] + (1.0 - rho) * self.anchor[i];
        }
        out
    }

    /// Nearby strictly feasible point for the given constraints: shrink the
    /// position towards the anchor until the support constraints hold, then
    /// lower the height (or keep shrinking when the height is pinned).
    pub fn restore(&self, th: &[f64], cons: &[Constraint]) -> Result<Vec<f64>> {
        const MARGIN: f64 = 1e-12;
        let mut rhos = vec![1.0];
        let mut gap = 1e-9;
        while gap < 0.5 {
            rhos.push(1.0 - gap);
            gap *= 4.0;
        }
        let mut r = 0.5;
        while r > 1e-14 {
            rhos.push(r);
            r *= 0.5;
        }
        let min_s = MIN_ALPHA.ln();
        let mut smallest_needed = f64::INFINITY;
        for rho in rhos {
            let mut cand = self.shrink(th, rho);
            if let Some(xi) = self.pinned {
                cand[0] = xi;
            }
            let p = Parts::new(&self.layout, &cand);
            let mut ok = true;
            let mut worst_dep = f64::NEG_INFINITY;
            for c in cons {
                match self.evaluate(c, &p, false) {
                    None => {
                        ok = false;
                        break;
                    }
                    Some(e) => {
                        if c.depends_on_height() && self.pinned.is_none() {
                            worst_dep = worst_dep.max(e.value);
                        } else if !(e.value < -MARGIN) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            if self.pinned.is_none() && worst_dep > -MARGIN {
                cand[0] -= worst_dep + 1e-6 * (1.0 + worst_dep.abs());
                if cand[0] < min_s {
                    smallest_needed = smallest_needed.min(cand[0]);
                    continue;
                }
            }
            return Ok(cand);
        }
        Err(Error::Infeasible(if smallest_needed.is_finite() {
            format!("height would have to drop to {:e}", smallest_needed.exp())
        } else {
            "no shrunken position satisfies the support constraints".into()
        }))
    }
}

/// Solves `H x = -g` for symmetric positive definite `H`, adding a small
/// ridge if the factorization fails.
fn solve_spd(h: &Matrix, g: &Vector) -> Option<Vector> {
    let scale = h.diagonal().iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1e-300);
    let mut ridge = 0.0;
    for _ in 0..20 {
        let hr = h + Matrix::identity(h.nrows(), h.ncols()) * ridge;
        if let Some(ch) = hr.cholesky() {
            let x = ch.solve(&(-g));
            if x.iter().all(|v| v.is_finite()) {
                return Some(x);
            }
        }
        ridge = if ridge == 0.0 { scale * 1e-14 } else { ridge * 100.0 };
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;

    fn finite_difference(prob: &Problem, c: &Constraint, th: &[f64]) -> Vector {
        let h = 1e-6;
        Vector::from_fn(th.len(), |k, _| {
            let mut tp = th.to_vec();
            let mut tm = th.to_vec();
            tp[k] += h;
            tm[k] -= h;
            let vp = prob.evaluate(c, &Parts::new(&prob.layout, &tp), false).unwrap().value;
            let vm = prob.evaluate(c, &Parts::new(&prob.layout, &tm), false).unwrap().value;
            (vp - vm) / (2.0 * h)
        })
    }

    #[test]
    fn constraint_gradients_match_differences() {
        let f = LogConcaveFunction::bump(&[vector(&[0.6, 0.0]), vector(&[-0.3, 0.5]), vector(&[-0.3, -0.5])]).unwrap();
        let f = LogConcaveFunction::half_restriction(f, vector(&[0.6, 0.8])).unwrap();
        let prob = Problem::new(&f, Reference::HeightPower { dim: 2, s: 1.0 }, None, vector(&[0.1, 0.1]));
        let a = Matrix::from_row_slice(2, 2, &[0.5, 0.1, 0.1, 0.4]);
        let th = prob.layout.pack(-0.2, &a, &vector(&[0.05, -0.02]));
        let mut cons = prob.aggregated();
        let h = LogConcaveFunction::height(2).unwrap();
        let hp = Problem::new(&h, Reference::HeightPower { dim: 2, s: 1.0 }, None, vector(&[0.0, 0.0]));
        for c in &cons {
            let e = prob.evaluate(c, &Parts::new(&prob.layout, &th), true).unwrap();
            let fd = finite_difference(&prob, c, &th);
            assert!((e.grad - fd).norm() < 1e-6, "{c:?}");
        }
        cons = vec![
            Constraint::Value {
                piece: 0,
                y: vector(&[0.3, -0.6]),
            },
            Constraint::Contain {
                piece: 0,
                z: vector(&[0.6, 0.8]),
            },
        ];
        for c in &cons {
            let e = hp.evaluate(c, &Parts::new(&hp.layout, &th), true).unwrap();
            let fd = finite_difference(&hp, c, &th);
            assert!((e.grad - fd).norm() < 1e-6, "{c:?}");
        }
    }
}
