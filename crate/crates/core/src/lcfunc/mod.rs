//! Log-concave functions on `R^d`. Besides the height function and its
//! relatives there are bump functions built from log-affine majorants;
//! any of them can be cut to a half-space or moved to an affine position.

mod analytics;
mod majorant;
mod radial;

pub use analytics::{TiltedSup, TiltMethod};
pub use majorant::{ell_majorant, zeta, LogAffineMajorant};
pub use radial::Radial;
pub(crate) use radial::{height_power_maximizer, height_power_maximizer_slope};

use crate::error::{Error, Result};
use crate::linalg::{check_dim, expect_dim, Matrix, Vector, SPHERE_SNAP};
use crate::position::AffinePosition;

/// Minimum of finitely many log-affine majorants of the height function.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    majorants: Vec<LogAffineMajorant>,
}

impl Bump {
    pub fn new(anchors: &[Vector]) -> Result<Self> {
        let first = anchors
            .first()
            .ok_or_else(|| Error::InvalidParameter("bump needs at least one anchor".into()))?;
        let d = first.len();
        check_dim(d)?;
        let majorants = anchors
            .iter()
            .map(|u| {
                expect_dim(d, u.len())?;
                ell_majorant(u)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Bump { majorants })
    }

    pub fn dim(&self) -> usize {
        self.majorants[0].dim()
    }

    pub fn majorants(&self) -> &[LogAffineMajorant] {
        &self.majorants
    }

    pub fn anchors(&self) -> Vec<Vector> {
        self.majorants.iter().map(|m| m.anchor().clone()).collect()
    }

    /// All anchors strictly inside the unit ball.
    pub fn is_regular(&self) -> bool {
        self.majorants.iter().all(|m| !m.is_boundary())
    }

    pub fn log_value(&self, x: &Vector) -> f64 {
        self.majorants
            .iter()
            .map(|m| m.log_value(x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A proper log-concave function, described symbolically.
#[derive(Debug, Clone, PartialEq)]
pub enum LogConcaveFunction {
    /// `sqrt(1 - |x|^2)` on the unit ball.
    Height { dim: usize },
    /// Height function raised to the power `s > 0`.
    HeightPower { dim: usize, s: f64 },
    /// Indicator of a closed ball.
    BallIndicator { radius: f64, center: Vector },
    Bump(Bump),
    /// `exp(-|x|^2)`.
    Gaussian { dim: usize },
    /// `exp(-|x|^p)` with `p >= 1`.
    ExpNorm { dim: usize, p: f64 },
    /// Polar function of the height power with exponent `s`.
    PolarHeightPower { dim: usize, s: f64 },
    /// `inner` on `{<x, normal> >= 0}`, zero elsewhere.
    HalfRestriction {
        inner: Box<LogConcaveFunction>,
        normal: Vector,
    },
    /// `alpha * inner(A^{-1}(x - a))`.
    Positioned {
        inner: Box<LogConcaveFunction>,
        position: AffinePosition,
    },
}

/// One term of the representation `log f = min_k piece_k`.
#[derive(Debug, Clone, PartialEq)]
pub enum LogPiece {
    /// `offset + <slope, x>`.
    Affine { offset: f64, slope: Vector },
    /// No constraint (`+inf`) on `{<normal, x> <= bound}`, `-inf` outside.
    HalfSpace { normal: Vector, bound: f64 },
    /// `log` of a smooth log-concave function (finite on the interior of its support).
    Smooth(LogConcaveFunction),
}

fn positive_param(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl LogConcaveFunction {
    pub fn height(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::Height { dim })
    }

    pub fn height_power(dim: usize, s: f64) -> Result<Self> {
        check_dim(dim)?;
        positive_param("s", s)?;
        Ok(Self::HeightPower { dim, s })
    }

    pub fn ball_indicator(radius: f64, center: Vector) -> Result<Self> {
        check_dim(center.len())?;
        positive_param("radius", radius)?;
        if !center.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("center must be finite".into()));
        }
        Ok(Self::BallIndicator { radius, center })
    }

    pub fn bump(anchors: &[Vector]) -> Result<Self> {
        Ok(Self::Bump(Bump::new(anchors)?))
    }

    pub fn gaussian(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::Gaussian { dim })
    }

    pub fn exp_norm(dim: usize, p: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidParameter(format!("p must be at least 1, got {p}")));
        }
        Ok(Self::ExpNorm { dim, p })
    }

    pub fn polar_height_power(dim: usize, s: f64) -> Result<Self> {
        check_dim(dim)?;
        positive_param("s", s)?;
        Ok(Self::PolarHeightPower { dim, s })
    }

    pub fn half_restriction(inner: LogConcaveFunction, normal: Vector) -> Result<Self> {
        expect_dim(inner.dim(), normal.len())?;
        let n = normal.norm();
        if !n.is_finite() || (n - 1.0).abs() > SPHERE_SNAP {
            return Err(Error::InvalidParameter(format!("normal must be a unit vector, norm {n}")));
        }
        Ok(Self::HalfRestriction {
            inner: Box::new(inner),
            normal: normal / n,
        })
    }

    pub fn positioned(inner: LogConcaveFunction, position: AffinePosition) -> Result<Self> {
        expect_dim(inner.dim(), position.dim())?;
        Ok(Self::Positioned {
            inner: Box::new(inner),
            position,
        })
    }

    /// `alpha * self`.
    pub fn scaled(self, alpha: f64) -> Result<Self> {
        let d = self.dim();
        let pos = AffinePosition::new(alpha, Matrix::identity(d, d), Vector::zeros(d))?;
        Self::positioned(self, pos)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Height { dim }
            | Self::HeightPower { dim, .. }
            | Self::Gaussian { dim }
            | Self::ExpNorm { dim, .. }
            | Self::PolarHeightPower { dim, .. } => *dim,
            Self::BallIndicator { center, .. } => center.len(),
            Self::Bump(b) => b.dim(),
            Self::HalfRestriction { inner, .. } | Self::Positioned { inner, .. } => inner.dim(),
        }
    }

    /// Radial profile for functions of `|x|` centred at the origin.
    pub fn radial(&self) -> Option<Radial> {
        match self {
            Self::Height { .. } => Some(Radial::HeightPower { s: 1.0 }),
            Self::HeightPower { s, .. } => Some(Radial::HeightPower { s: *s }),
            Self::Gaussian { .. } => Some(Radial::Gaussian),
            Self::ExpNorm { p, .. } => Some(if *p == 2.0 {
                Radial::Gaussian
            } else {
                Radial::ExpNorm { p: *p }
            }),
            Self::PolarHeightPower { s, .. } => Some(Radial::PolarHeightPower { s: *s }),
            Self::BallIndicator { radius, center } if center.iter().all(|&c| c == 0.0) => {
                Some(Radial::Ball { radius: *radius })
            }
            _ => None,
        }
    }

    /// `log f(x)` without a dimension check.
    pub fn log_value(&self, x: &Vector) -> f64 {
        match self {
            Self::BallIndicator { radius, center } => {
                if (x - center).norm() <= *radius {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::Bump(b) => b.log_value(x),
            Self::HalfRestriction { inner, normal } => {
                if x.dot(normal) >= 0.0 {
                    inner.log_value(x)
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::Positioned { inner, position } => position.alpha().ln() + inner.log_value(&position.pull_back(x)),
            _ => self.radial().expect("radial variant").log_profile(x.norm()),
        }
    }

    /// `f(x)` without a dimension check.
    pub fn value(&self, x: &Vector) -> f64 {
        self.log_value(x).exp()
    }

    /// `f(x)`; `+inf` only arises from bumps whose anchors all lie on the sphere.
    pub fn eval(&self, x: &Vector) -> Result<f64> {
        expect_dim(self.dim(), x.len())?;
        Ok(self.value(x))
    }

    /// A supergradient of `log f` at a point where it is finite.
    pub fn log_grad(&self, x: &Vector) -> Vector {
        let d = self.dim();
        match self {
            Self::BallIndicator { .. } => Vector::zeros(d),
            Self::Bump(b) => {
                let mut best = f64::INFINITY;
                let mut grad = Vector::zeros(d);
                for m in b.majorants() {
                    if let Some((offset, slope)) = m.log_affine() {
                        let v = offset + slope.dot(x);
                        if v < best {
                            best = v;
                            grad = slope;
                        }
                    }
                }
                grad
            }
            Self::HalfRestriction { inner, .. } => inner.log_grad(x),
            Self::Positioned { inner, position } => {
                position.inverse().transpose() * inner.log_grad(&position.pull_back(x))
            }
            _ => {
                let prof = self.radial().expect("radial variant");
                let r = x.norm();
                if r == 0.0 || r >= prof.support_radius() {
                    return Vector::zeros(d);
                }
                let (g, _) = prof.log_profile_derivatives(r);
                x * (g / r)
            }
        }
    }

    /// Hessian of `log f` (zero on flat and log-affine parts).
    pub fn log_hess(&self, x: &Vector) -> Matrix {
        let d = self.dim();
        match self {
            Self::BallIndicator { .. } | Self::Bump(_) => Matrix::zeros(d, d),
            Self::HalfRestriction { inner, .. } => inner.log_hess(x),
            Self::Positioned { inner, position } => {
                let inv = position.inverse();
                inv.transpose() * inner.log_hess(&position.pull_back(x)) * inv
            }
            _ => {
                let prof = self.radial().expect("radial variant");
                let r = x.norm();
                if r >= prof.support_radius() {
                    return Matrix::zeros(d, d);
                }
                if r < 1e-12 {
                    return Matrix::identity(d, d) * prof.curvature_at_origin();
                }
                let (g, c) = prof.log_profile_derivatives(r);
                let xh = x / r;
                let proj = &xh * xh.transpose();
                &proj * c + (Matrix::identity(d, d) - &proj) * (g / r)
            }
        }
    }

    /// Decomposition `log f = min_k piece_k(x)`.
    pub fn pieces(&self) -> Vec<LogPiece> {
        match self {
            Self::Bump(b) => b
                .majorants()
                .iter()
                .map(|m| match m.log_affine() {
                    Some((offset, slope)) => LogPiece::Affine { offset, slope },
                    None => LogPiece::HalfSpace {
                        normal: m.anchor().clone(),
                        bound: 1.0,
                    },
                })
                .collect(),
            Self::HalfRestriction { inner, normal } => {
                let mut out = inner.pieces();
                out.push(LogPiece::HalfSpace {
                    normal: -normal,
                    bound: 0.0,
                });
                out
            }
            Self::Positioned { inner, position } => {
                let inv_t = position.inverse().transpose();
                let ln_alpha = position.alpha().ln();
                inner
                    .pieces()
                    .into_iter()
                    .map(|p| match p {
                        LogPiece::Affine { offset, slope } => {
                            let s = &inv_t * slope;
                            LogPiece::Affine {
                                offset: ln_alpha + offset - s.dot(position.shift()),
                                slope: s,
                            }
                        }
                        LogPiece::HalfSpace { normal, bound } => {
                            let n = &inv_t * normal;
                            LogPiece::HalfSpace {
                                bound: bound + n.dot(position.shift()),
                                normal: n,
                            }
                        }
                        LogPiece::Smooth(g) => LogPiece::Smooth(Self::Positioned {
                            inner: Box::new(g),
                            position: position.clone(),
                        }),
                    })
                    .collect()
            }
            _ => vec![LogPiece::Smooth(self.clone())],
        }
    }

    /// Ellipsoid `{c + M z : |z| <= 1}` equal to the support of a smooth
    /// piece, when that support is bounded.
    pub fn support_ellipsoid(&self) -> Option<(Vector, Matrix)> {
        let d = self.dim();
        match self {
            Self::Height { .. } | Self::HeightPower { .. } => Some((Vector::zeros(d), Matrix::identity(d, d))),
            Self::BallIndicator { radius, center } => Some((center.clone(), Matrix::identity(d, d) * *radius)),
            Self::HalfRestriction { inner, .. } => inner.support_ellipsoid(),
            Self::Positioned { inner, position } => inner
                .support_ellipsoid()
                .map(|(c, m)| (position.push_forward(&c), position.matrix() * m)),
            _ => None,
        }
    }

    /// Whether every piece is affine or a half-space, so that linear
    /// programming is exact for this function.
    pub fn is_piecewise_log_affine(&self) -> bool {
        self.pieces().iter().all(|p| !matches!(p, LogPiece::Smooth(_)))
    }

    pub fn as_bump(&self) -> Option<&Bump> {
        match self {
            Self::Bump(b) => Some(b),
            _ => None,
        }
    }
}

impl LogPiece {
    pub fn log_value(&self, x: &Vector) -> f64 {
        match self {
            LogPiece::Affine { offset, slope } => offset + slope.dot(x),
            LogPiece::HalfSpace { normal, bound } => {
                if normal.dot(x) <= *bound {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
            LogPiece::Smooth(g) => g.log_value(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unit, vector};
    use std::f64::consts::{E, SQRT_2};

    fn two_point_bump() -> LogConcaveFunction {
        LogConcaveFunction::bump(&[vector(&[SQRT_2 / 2.0]), vector(&[-SQRT_2 / 2.0])]).unwrap()
    }

    #[test]
    fn height_at_origin() {
        let h = LogConcaveFunction::height(3).unwrap();
        assert_eq!(h.eval(&Vector::zeros(3)).unwrap(), 1.0);
        assert_eq!(h.eval(&unit(3, 1)).unwrap(), 0.0);
        assert!(h.eval(&Vector::zeros(2)).is_err());
    }

    #[test]
    fn bump_values() {
        let f = two_point_bump();
        assert!((f.eval(&vector(&[0.0])).unwrap() - E / SQRT_2).abs() < 1e-14);
        let u = vector(&[SQRT_2 / 2.0]);
        assert!((f.eval(&u).unwrap() - SQRT_2 / 2.0).abs() < 1e-15);
        let far = f.eval(&vector(&[10.0])).unwrap();
        let expect = (1.0 - 10.0 * SQRT_2).exp() / SQRT_2;
        assert!((far - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn boundary_bump_anchor_cuts_support() {
        let f = LogConcaveFunction::bump(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        assert_eq!(f.eval(&vector(&[0.5, 3.0])).unwrap(), 1.0);
        assert_eq!(f.eval(&vector(&[1.5, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn positioned_evaluation() {
        let h = LogConcaveFunction::height(2).unwrap();
        let shift = AffinePosition::new(1.0, Matrix::identity(2, 2), unit(2, 0)).unwrap();
        let g = LogConcaveFunction::positioned(h.clone(), shift).unwrap();
        assert_eq!(g.eval(&unit(2, 0)).unwrap(), 1.0);
        let ball = LogConcaveFunction::ball_indicator(1.0, Vector::zeros(2)).unwrap();
        let scale = AffinePosition::new(2.0, Matrix::identity(2, 2) * 2.0, Vector::zeros(2)).unwrap();
        let g = LogConcaveFunction::positioned(ball, scale).unwrap();
        assert_eq!(g.eval(&vector(&[1.9, 0.0])).unwrap(), 2.0);
        assert_eq!(g.eval(&vector(&[2.1, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn half_restriction() {
        let g = LogConcaveFunction::half_restriction(LogConcaveFunction::gaussian(2).unwrap(), unit(2, 0)).unwrap();
        assert_eq!(g.eval(&vector(&[-0.1, 0.0])).unwrap(), 0.0);
        assert_eq!(g.eval(&vector(&[0.0, 0.0])).unwrap(), 1.0);
        assert!(LogConcaveFunction::half_restriction(LogConcaveFunction::gaussian(2).unwrap(), vector(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn pieces_reproduce_log_value() {
        let f = two_point_bump();
        let pos = AffinePosition::new(2.0, Matrix::from_element(1, 1, 3.0), vector(&[1.0])).unwrap();
        let g = LogConcaveFunction::positioned(f, pos).unwrap();
        let pieces = g.pieces();
        for x in [-4.0, -1.0, 0.3, 2.0, 7.0] {
            let x = vector(&[x]);
            let via = pieces.iter().map(|p| p.log_value(&x)).fold(f64::INFINITY, f64::min);
            assert!((via - g.log_value(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_and_hessian_by_differences() {
        let pos = AffinePosition::new(1.5, Matrix::from_row_slice(2, 2, &[1.2, 0.3, 0.3, 0.8]), vector(&[0.1, -0.2])).unwrap();
        let fs = [
            LogConcaveFunction::height_power(2, 1.7).unwrap(),
            LogConcaveFunction::gaussian(2).unwrap(),
            LogConcaveFunction::positioned(LogConcaveFunction::height(2).unwrap(), pos).unwrap(),
            LogConcaveFunction::polar_height_power(2, 1.0).unwrap(),
        ];
        let x = vector(&[0.2, 0.35]);
        let h = 1e-6;
        for f in fs {
            let g = f.log_grad(&x);
            let hs = f.log_hess(&x);
            for k in 0..2 {
                let e = unit(2, k) * h;
                let fd = (f.log_value(&(&x + &e)) - f.log_value(&(&x - &e))) / (2.0 * h);
                assert!((g[k] - fd).abs() < 1e-6, "{f:?}");
                let gd = (f.log_grad(&(&x + &e)) - f.log_grad(&(&x - &e))) / (2.0 * h);
                for j in 0..2 {
                    assert!((hs[(j, k)] - gd[j]).abs() < 1e-5, "{f:?}");
                }
            }
        }
    }

    #[test]
    fn support_ellipsoid_of_positioned_height() {
        let pos = AffinePosition::new(1.0, Matrix::identity(2, 2) * 3.0, vector(&[1.0, 0.0])).unwrap();
        let g = LogConcaveFunction::positioned(LogConcaveFunction::height(2).unwrap(), pos).unwrap();
        let (c, m) = g.support_ellipsoid().unwrap();
        assert_eq!(c, vector(&[1.0, 0.0]));
        assert_eq!(m[(0, 0)], 3.0);
        assert!(LogConcaveFunction::gaussian(2).unwrap().support_ellipsoid().is_none());
    }
}
