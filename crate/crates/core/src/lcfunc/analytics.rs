//! Tilted suprema `sup_x (<p, x> + log f(x))` (the sup norm is the case `p = 0`) and integrals.

use rand::Rng;

use super::{LogConcaveFunction, LogPiece};
use crate::error::{Error, Result};
use crate::linalg::{expect_dim, Vector};
use crate::lp::{maximize, LpOutcome};
use crate::quadrature::{integrate_1d, integrate_2d, qmc_box, Estimate};
use crate::sampling::{random_in_ball, rng, sphere_directions};

/// How a tilted supremum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiltMethod {
    ClosedForm,
    LinearProgram,
    Numeric,
}

/// `S(p) = sup_x (<p, x> + log f(x))`, possibly `+inf`, with a maximizer
/// when one is known.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedSup {
    pub value: f64,
    pub argmax: Option<Vector>,
    pub method: TiltMethod,
}

impl TiltedSup {
    fn unbounded(method: TiltMethod) -> Self {
        TiltedSup {
            value: f64::INFINITY,
            argmax: None,
            method,
        }
    }
}

pub(crate) const NUMERIC_STARTS: usize = 32;
const NUMERIC_GRAD_TOL: f64 = 1e-10;
const NUMERIC_MAX_ITERS: usize = 4000;
const UNBOUNDED_LEVEL: f64 = 1e8;

/// Points `QMC_POINTS` used for integrals in three or more dimensions.
pub const QMC_POINTS: usize = 1_000_000;

fn piecewise_lp(pieces: &[LogPiece], p: &Vector) -> Result<TiltedSup> {
    let d = p.len();
    let mut c: Vec<f64> = p.iter().copied().collect();
    c.push(1.0);
    let mut rows = Vec::with_capacity(pieces.len());
    let mut rhs = Vec::with_capacity(pieces.len());
    let mut has_affine = false;
    for piece in pieces {
        match piece {
            LogPiece::Affine { offset, slope } => {
                let mut row: Vec<f64> = slope.iter().map(|s| -s).collect();
                row.push(1.0);
                rows.push(row);
                rhs.push(*offset);
                has_affine = true;
            }
            LogPiece::HalfSpace { normal, bound } => {
                let mut row: Vec<f64> = normal.iter().copied().collect();
                row.push(0.0);
                rows.push(row);
                rhs.push(*bound);
            }
            LogPiece::Smooth(_) => unreachable!("caller checks for smooth pieces"),
        }
    }
    if !has_affine {
        // Only support constraints: log f is +inf on a non-empty set or the
        // function vanishes identically.
        c[d] = 0.0;
        return match maximize(&c, &rows, &rhs) {
            LpOutcome::Infeasible => Err(Error::Improper),
            _ => Ok(TiltedSup::unbounded(TiltMethod::LinearProgram)),
        };
    }
    match maximize(&c, &rows, &rhs) {
        LpOutcome::Optimal { z, value } => Ok(TiltedSup {
            value,
            argmax: Some(Vector::from_iterator(d, z.into_iter().take(d))),
            method: TiltMethod::LinearProgram,
        }),
        LpOutcome::Unbounded => Ok(TiltedSup::unbounded(TiltMethod::LinearProgram)),
        LpOutcome::Infeasible => Err(Error::Improper),
        LpOutcome::IterationLimit => Err(Error::InvalidParameter("linear program hit its pivot limit".into())),
    }
}

impl LogConcaveFunction {
    /// `sup_x (<p, x> + log f(x))`, exact where a closed form or linear
    /// program is available, numeric otherwise.
    pub fn log_tilted_sup(&self, p: &Vector) -> Result<TiltedSup> {
        expect_dim(self.dim(), p.len())?;
        match self.exact_tilted_sup(p) {
            Some(r) => r,
            None => self.numeric_tilted_sup(p, 0),
        }
    }

    fn exact_tilted_sup(&self, p: &Vector) -> Option<Result<TiltedSup>> {
        if let Some(prof) = self.radial() {
            let rho = p.norm();
            let value = prof.support(rho);
            let argmax = prof.support_maximizer(rho).map(|r| {
                if rho > 0.0 {
                    p * (r / rho)
                } else {
                    Vector::zeros(p.len())
                }
            });
            return Some(Ok(TiltedSup {
                value,
                argmax: if value.is_finite() { argmax } else { None },
                method: TiltMethod::ClosedForm,
            }));
        }
        match self {
            Self::BallIndicator { radius, center } => {
                let rho = p.norm();
                let dir = if rho > 0.0 { p / rho } else { Vector::zeros(p.len()) };
                Some(Ok(TiltedSup {
                    value: p.dot(center) + radius * rho,
                    argmax: Some(center + dir * *radius),
                    method: TiltMethod::ClosedForm,
                }))
            }
            Self::Positioned { inner, position } => {
                let q = position.matrix().transpose() * p;
                let inner_sup = inner.exact_tilted_sup(&q)?;
                Some(inner_sup.map(|t| TiltedSup {
                    value: position.alpha().ln() + p.dot(position.shift()) + t.value,
                    argmax: t.argmax.map(|y| position.push_forward(&y)),
                    method: t.method,
                }))
            }
            Self::HalfRestriction { inner, normal } if inner.radial().is_some() => {
                let along = p.dot(normal);
                if along >= 0.0 {
                    inner.exact_tilted_sup(p)
                } else {
                    // The free maximizer leaves the half-space; for a radial
                    // profile the constrained one sits on the hyperplane.
                    let q = p - normal * along;
                    inner.exact_tilted_sup(&q)
                }
            }
            _ if self.is_piecewise_log_affine() => Some(piecewise_lp(&self.pieces(), p)),
            _ => None,
        }
    }

    /// Multi-start projected gradient ascent of `<p, x> + log f(x)`.
    ///
    /// Used for variants without an exact route and as an independent
    /// cross-check of the exact ones.
    pub fn numeric_tilted_sup(&self, p: &Vector, seed: u64) -> Result<TiltedSup> {
        expect_dim(self.dim(), p.len())?;
        let d = self.dim();
        let halfspaces: Vec<(Vector, f64)> = self
            .pieces()
            .into_iter()
            .filter_map(|pc| match pc {
                LogPiece::HalfSpace { normal, bound } => Some((normal, bound)),
                _ => None,
            })
            .collect();
        let project = |x: &mut Vector| {
            for _ in 0..8 {
                let mut moved = false;
                for (n, b) in &halfspaces {
                    let excess = n.dot(x) - b;
                    if excess > 0.0 {
                        *x -= n * ((excess + 1e-15 * (1.0 + b.abs())) / n.norm_squared());
                        moved = true;
                    }
                }
                if !moved {
                    break;
                }
            }
        };
        let objective = |x: &Vector| p.dot(x) + self.log_value(x);

        let (base, scale) = match self.support_ellipsoid() {
            Some((c, m)) => {
                let s = m.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
                (c, s)
            }
            None => (Vector::zeros(d), 1.0),
        };
        let mut g = rng(seed);
        let mut starts = vec![base.clone()];
        let mut attempts = 0;
        while starts.len() < NUMERIC_STARTS && attempts < 50 * NUMERIC_STARTS {
            attempts += 1;
            let radius = scale * [0.3, 0.9, 3.0][attempts % 3];
            let mut x = &base + random_in_ball(d, radius, &mut g);
            project(&mut x);
            if objective(&x).is_finite() || g.random::<f64>() < 0.05 {
                starts.push(x);
            }
        }

        let mut best: Option<(f64, Vector)> = None;
        for mut x in starts {
            let mut fx = objective(&x);
            if fx.is_nan() || fx == f64::NEG_INFINITY {
                continue;
            }
            let mut step = 1.0;
            for _ in 0..NUMERIC_MAX_ITERS {
                if fx > UNBOUNDED_LEVEL || x.norm() > UNBOUNDED_LEVEL {
                    return Ok(TiltedSup::unbounded(TiltMethod::Numeric));
                }
                let grad = p + self.log_grad(&x);
                let mut accepted = false;
                let mut trial_step = step;
                for _ in 0..60 {
                    let mut y = &x + &grad * trial_step;
                    project(&mut y);
                    let fy = objective(&y);
                    if fy.is_finite() && fy >= fx {
                        let moved = (&y - &x).norm();
                        x = y;
                        let gain = fy - fx;
                        fx = fy;
                        accepted = moved > 0.0 && (gain > 0.0 || moved > 1e-15);
                        break;
                    }
                    trial_step *= 0.5;
                }
                if !accepted {
                    break;
                }
                step = (trial_step * 2.0).min(1e6);
                // Projected gradient norm as the stopping criterion.
                let mut probe = &x + &grad * 1e-6;
                project(&mut probe);
                if (&probe - &x).norm() / 1e-6 < NUMERIC_GRAD_TOL {
                    break;
                }
            }
            if best.as_ref().is_none_or(|(b, _)| fx > *b) {
                best = Some((fx, x));
            }
        }
        match best {
            Some((value, x)) => Ok(TiltedSup {
                value,
                argmax: Some(x),
                method: TiltMethod::Numeric,
            }),
            None => Err(Error::Improper),
        }
    }

    /// `||f||_inf`.
    pub fn sup_norm(&self) -> Result<f64> {
        let s = self.log_tilted_sup(&Vector::zeros(self.dim()))?;
        if s.value == f64::INFINITY {
            return Err(Error::Unbounded);
        }
        if s.value == f64::NEG_INFINITY {
            return Err(Error::Improper);
        }
        Ok(s.value.exp())
    }

    /// A maximizer of `f`.
    pub fn argmax(&self) -> Result<Vector> {
        let s = self.log_tilted_sup(&Vector::zeros(self.dim()))?;
        if s.value == f64::INFINITY {
            return Err(Error::Unbounded);
        }
        s.argmax.ok_or(Error::Unbounded)
    }

    /// `∫ f`, in closed form where available and by quadrature otherwise.
    pub fn integral(&self) -> Result<Estimate> {
        let exact = |value| Ok(Estimate { value, error: 0.0 });
        if let Some(prof) = self.radial() {
            return exact(prof.integral(self.dim()));
        }
        match self {
            Self::BallIndicator { radius, .. } => exact(super::radial::Radial::Ball { radius: *radius }.integral(self.dim())),
            Self::Positioned { inner, position } => {
                let base = inner.integral()?;
                let k = position.alpha() * position.det().abs();
                Ok(Estimate {
                    value: k * base.value,
                    error: k * base.error,
                })
            }
            Self::HalfRestriction { inner, .. } if inner.radial().is_some() => {
                let base = inner.integral()?;
                Ok(Estimate {
                    value: 0.5 * base.value,
                    error: 0.5 * base.error,
                })
            }
            _ => self.numeric_integral(),
        }
    }

    /// Quadrature on a box found by probing the tails along rays.
    pub fn numeric_integral(&self) -> Result<Estimate> {
        let d = self.dim();
        let top = self.log_tilted_sup(&Vector::zeros(d))?;
        if top.value == f64::INFINITY {
            return Err(Error::DivergentIntegral { direction: vec![] });
        }
        let center = top.argmax.clone().unwrap_or_else(|| Vector::zeros(d));
        let level = top.value - 40.0;
        let mut reach: f64 = 0.0;
        for u in sphere_directions(d, 64, 17) {
            let mut r = 1.0;
            while self.log_value(&(&center + &u * r)) > level {
                r *= 2.0;
                if r > 1e6 {
                    return Err(Error::DivergentIntegral {
                        direction: u.iter().copied().collect(),
                    });
                }
            }
            reach = reach.max(r);
        }
        let lo: Vec<f64> = center.iter().map(|c| c - reach).collect();
        let hi: Vec<f64> = center.iter().map(|c| c + reach).collect();
        let scale = top.value.exp() * (2.0 * reach).powi(d as i32);
        let f = |x: &[f64]| self.value(&Vector::from_column_slice(x));
        Ok(match d {
            1 => integrate_1d(|x| f(&[x]), lo[0], hi[0], 1e-12 * scale, 1e-10),
            2 => integrate_2d(|x, y| f(&[x, y]), [lo[0], lo[1]], [hi[0], hi[1]], 1e-9 * scale, 1e-8),
            _ => qmc_box(f, &lo, &hi, QMC_POINTS, 0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unit, vector, Matrix};
    use crate::position::AffinePosition;
    use std::f64::consts::{E, PI, SQRT_2};

    fn two_point_bump() -> LogConcaveFunction {
        LogConcaveFunction::bump(&[vector(&[SQRT_2 / 2.0]), vector(&[-SQRT_2 / 2.0])]).unwrap()
    }

    #[test]
    fn sup_norms() {
        assert_eq!(LogConcaveFunction::height(2).unwrap().sup_norm().unwrap(), 1.0);
        assert!((two_point_bump().sup_norm().unwrap() - E / SQRT_2).abs() < 1e-12);
        let g = LogConcaveFunction::height(1).unwrap().scaled(3.0).unwrap();
        assert!((g.sup_norm().unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn bump_sup_matches_grid() {
        let f = two_point_bump();
        let grid = (0..=20_000)
            .map(|k| f.value(&vector(&[-2.0 + 4.0 * k as f64 / 20_000.0])))
            .fold(0.0, f64::max);
        assert!((f.sup_norm().unwrap() - grid).abs() < 1e-6);
    }

    #[test]
    fn unbounded_and_improper() {
        let f = LogConcaveFunction::bump(&[vector(&[1.0])]).unwrap();
        assert!(matches!(f.sup_norm(), Err(Error::Unbounded)));
        let g = LogConcaveFunction::bump(&[vector(&[1.0]), vector(&[-1.0]), vector(&[0.0])]).unwrap();
        assert_eq!(g.sup_norm().unwrap(), 1.0);
    }

    #[test]
    fn exact_and_numeric_agree() {
        let pos = AffinePosition::new(1.3, Matrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 0.6]), vector(&[0.3, -0.1])).unwrap();
        let fs = [
            LogConcaveFunction::height(2).unwrap(),
            LogConcaveFunction::gaussian(2).unwrap(),
            LogConcaveFunction::exp_norm(2, 3.0).unwrap(),
            LogConcaveFunction::positioned(LogConcaveFunction::height_power(2, 2.0).unwrap(), pos).unwrap(),
            LogConcaveFunction::half_restriction(LogConcaveFunction::gaussian(2).unwrap(), unit(2, 0)).unwrap(),
            LogConcaveFunction::polar_height_power(2, 1.0).unwrap(),
        ];
        for f in fs {
            for p in [vector(&[0.0, 0.0]), vector(&[0.4, -0.3]), vector(&[-0.8, 0.1])] {
                let exact = f.log_tilted_sup(&p).unwrap();
                let num = f.numeric_tilted_sup(&p, 3).unwrap();
                assert!((exact.value - num.value).abs() < 1e-7, "{f:?} p={p:?}: {exact:?} vs {num:?}");
            }
        }
    }

    #[test]
    fn closed_form_integrals() {
        assert!((LogConcaveFunction::height(1).unwrap().integral().unwrap().value - PI / 2.0).abs() < 1e-14);
        assert!((LogConcaveFunction::height(2).unwrap().integral().unwrap().value - 2.0 * PI / 3.0).abs() < 1e-14);
        let ball = LogConcaveFunction::ball_indicator(1.0, vector(&[0.0, 0.0])).unwrap();
        assert!((ball.integral().unwrap().value - PI).abs() < 1e-14);
    }

    #[test]
    fn bump_integral_d1_by_hand() {
        // f(x) = (1/sqrt2) e^{1 - sqrt2 |x|}, integral sqrt2 e / sqrt2 = e
        let est = two_point_bump().integral().unwrap();
        assert!((est.value - E).abs() < 1e-8, "{est:?}");
    }

    #[test]
    fn numeric_integral_of_height_2d() {
        let est = LogConcaveFunction::height(2).unwrap().numeric_integral().unwrap();
        assert!((est.value - 2.0 * PI / 3.0).abs() < 1e-5, "{est:?}");
    }
}
