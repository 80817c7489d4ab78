//! The reference function `w` of a John-type problem: a height power on the
//! unit ball or the indicator of a ball. Both have `sup w = 1`.

use crate::error::{Error, Result};
use crate::lcfunc::{height_power_maximizer, height_power_maximizer_slope, LogConcaveFunction};
use crate::linalg::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Reference {
    HeightPower { dim: usize, s: f64 },
    Ball { center: Vector, radius: f64 },
}

/// `sup_y (<q, y> + log w(y))` with its maximizer and Hessian in `q`.
pub(crate) struct Tilt {
    pub value: f64,
    pub argmax: Vector,
    pub hessian: Matrix,
}

impl Reference {
    pub fn from_function(w: &LogConcaveFunction) -> Result<Self> {
        match w {
            LogConcaveFunction::Height { dim } => Ok(Reference::HeightPower { dim: *dim, s: 1.0 }),
            LogConcaveFunction::HeightPower { dim, s } => Ok(Reference::HeightPower { dim: *dim, s: *s }),
            LogConcaveFunction::BallIndicator { radius, center } => Ok(Reference::Ball {
                center: center.clone(),
                radius: *radius,
            }),
            _ => Err(Error::Precondition(
                "reference function must be a height power or a ball indicator (bounded support)".into(),
            )),
        }
    }

    /// Centre and radius of the support ball.
    pub fn support_ball(&self) -> (Vector, f64) {
        match self {
            Reference::HeightPower { dim, .. } => (Vector::zeros(*dim), 1.0),
            Reference::Ball { center, radius } => (center.clone(), *radius),
        }
    }

    /// Whether `log w` is finite on the boundary sphere.
    pub fn closed_support(&self) -> bool {
        matches!(self, Reference::Ball { .. })
    }

    pub fn log_value_slice(&self, y: &[f64]) -> f64 {
        match self {
            Reference::HeightPower { s, .. } => {
                let n2: f64 = y.iter().map(|v| v * v).sum();
                if n2 < 1.0 {
                    0.5 * s * (1.0 - n2).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Reference::Ball { center, radius } => {
                let n2: f64 = y.iter().zip(center.iter()).map(|(a, c)| (a - c) * (a - c)).sum();
                if n2 <= radius * radius * (1.0 + 1e-15) {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn log_value(&self, y: &Vector) -> f64 {
        self.log_value_slice(y.as_slice())
    }

    pub fn log_grad(&self, y: &Vector) -> Vector {
        match self {
            Reference::HeightPower { s, .. } => {
                let n2 = y.norm_squared();
                y * (-s / (1.0 - n2))
            }
            Reference::Ball { .. } => Vector::zeros(y.len()),
        }
    }

    /// Euclidean projection onto the support ball, pulled slightly inside
    /// when the boundary is not part of the domain of `log w`.
    pub fn project(&self, y: &mut Vector) {
        let (c, r) = self.support_ball();
        let limit = if self.closed_support() { r } else { r * (1.0 - 1e-12) };
        let off = &*y - &c;
        let n = off.norm();
        if n > limit {
            *y = c + off * (limit / n);
        }
    }

    pub fn tilt(&self, q: &Vector) -> Tilt {
        let d = q.len();
        let rho = q.norm();
        match self {
            Reference::HeightPower { s, .. } => {
                let (r, one_minus) = height_power_maximizer(rho, *s);
                let value = rho * r + 0.5 * s * (one_minus * (1.0 + r)).ln();
                if rho == 0.0 {
                    return Tilt {
                        value,
                        argmax: Vector::zeros(d),
                        hessian: Matrix::identity(d, d) / *s,
                    };
                }
                let dir = q / rho;
                let proj = &dir * dir.transpose();
                let slope = height_power_maximizer_slope(rho, *s);
                Tilt {
                    value,
                    argmax: &dir * r,
                    hessian: &proj * slope + (Matrix::identity(d, d) - &proj) * (r / rho),
                }
            }
            Reference::Ball { center, radius } => {
                if rho == 0.0 {
                    return Tilt {
                        value: 0.0,
                        argmax: center.clone(),
                        hessian: Matrix::zeros(d, d),
                    };
                }
                let dir = q / rho;
                let proj = &dir * dir.transpose();
                Tilt {
                    value: q.dot(center) + radius * rho,
                    argmax: center + &dir * *radius,
                    hessian: (Matrix::identity(d, d) - proj) * (radius / rho),
                }
            }
        }
    }
}
