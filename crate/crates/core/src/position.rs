//! Affine positions `g(x) = alpha * w(A^{-1}(x - a))` of a function `w`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcfunc::LogConcaveFunction;
use crate::linalg::{check_dim, expect_dim, is_positive_definite, Matrix, Vector};

/// Smallest admissible `|det A|`.
pub const MIN_ABS_DET: f64 = 1e-12;

/// A position `(alpha, A, a)` in the inverse convention
/// `g(x) = alpha * w(A^{-1}(x - a))`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePosition {
    alpha: f64,
    matrix: Matrix,
    shift: Vector,
    inverse: Matrix,
    det: f64,
    positive_definite: bool,
}

impl AffinePosition {
    pub fn new(alpha: f64, matrix: Matrix, shift: Vector) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive and finite, got {alpha}")));
        }
        if !matrix.is_square() {
            return Err(Error::InvalidParameter("position matrix must be square".into()));
        }
        let d = matrix.nrows();
        check_dim(d)?;
        expect_dim(d, shift.len())?;
        if !matrix.iter().chain(shift.iter()).all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("position entries must be finite".into()));
        }
        let det = matrix.determinant();
        if det.abs() <= MIN_ABS_DET {
            return Err(Error::SingularMatrix { det });
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or(Error::SingularMatrix { det })?;
        let positive_definite = is_positive_definite(&matrix);
        Ok(AffinePosition {
            alpha,
            matrix,
            shift,
            inverse,
            det,
            positive_definite,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(1.0, Matrix::identity(d, d), Vector::zeros(d)).expect("identity is a valid position")
    }

    /// Converts the forward form `alpha * w(B x + b)` into the inverse
    /// convention: `A = B^{-1}`, `a = -B^{-1} b`.
    pub fn from_forward_form(alpha: f64, b: Matrix, shift: Vector) -> Result<Self> {
        let det = b.determinant();
        let inv = b.try_inverse().ok_or(Error::SingularMatrix { det })?;
        let a = -(&inv * shift);
        Self::new(alpha, inv, a)
    }

    /// Same position with `A` forced symmetric positive definite; fails otherwise.
    pub fn positive(alpha: f64, matrix: Matrix, shift: Vector) -> Result<Self> {
        let pos = Self::new(alpha, matrix, shift)?;
        if pos.positive_definite {
            Ok(pos)
        } else {
            Err(Error::NotPositiveDefinite)
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn shift(&self) -> &Vector {
        &self.shift
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn is_positive_definite(&self) -> bool {
        self.positive_definite
    }

    /// `A^{-1}(x - a)`: the point of `w` seen at `x`.
    pub fn pull_back(&self, x: &Vector) -> Vector {
        &self.inverse * (x - &self.shift)
    }

    /// `A y + a`.
    pub fn push_forward(&self, y: &Vector) -> Vector {
        &self.matrix * y + &self.shift
    }

    /// `(outer ∘ inner)`: applying `inner` then `outer` to a function.
    pub fn compose(outer: &AffinePosition, inner: &AffinePosition) -> Result<AffinePosition> {
        expect_dim(outer.dim(), inner.dim())?;
        AffinePosition::new(
            outer.alpha * inner.alpha,
            &outer.matrix * &inner.matrix,
            &outer.shift + &outer.matrix * &inner.shift,
        )
    }

    /// The position undoing this one.
    pub fn invert(&self) -> AffinePosition {
        AffinePosition::new(1.0 / self.alpha, self.inverse.clone(), -(&self.inverse * &self.shift))
            .expect("inverse of a valid position is valid")
    }

    /// Largest absolute entrywise difference in `(alpha, A, a)`.
    pub fn max_entry_diff(&self, other: &AffinePosition) -> f64 {
        let mut diff = (self.alpha - other.alpha).abs();
        for (x, y) in self.matrix.iter().zip(other.matrix.iter()) {
            diff = diff.max((x - y).abs());
        }
        for (x, y) in self.shift.iter().zip(other.shift.iter()) {
            diff = diff.max((x - y).abs());
        }
        diff
    }

    /// `log alpha + log |det A|`, the log of the integral ratio.
    pub fn log_volume(&self) -> f64 {
        self.alpha.ln() + self.det.abs().ln()
    }

    pub fn record(&self) -> PositionRecord {
        PositionRecord {
            alpha: self.alpha,
            matrix: self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect(),
            shift: self.shift.iter().copied().collect(),
        }
    }
}

/// Plain serializable form of a position (inverse convention).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionRecord {
    pub alpha: f64,
    pub matrix: Vec<Vec<f64>>,
    pub shift: Vec<f64>,
}

impl PositionRecord {
    pub fn to_position(&self) -> Result<AffinePosition> {
        let d = self.shift.len();
        if self.matrix.len() != d || self.matrix.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidParameter("position matrix must be d x d".into()));
        }
        let m = Matrix::from_fn(d, d, |i, j| self.matrix[i][j]);
        AffinePosition::new(self.alpha, m, Vector::from_vec(self.shift.clone()))
    }
}

impl Serialize for AffinePosition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffinePosition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = PositionRecord::deserialize(d)?;
        rec.to_position().map_err(serde::de::Error::custom)
    }
}

/// Wraps `w` into its positioned copy.
pub fn apply_position(pos: &AffinePosition, w: &LogConcaveFunction) -> Result<LogConcaveFunction> {
    LogConcaveFunction::positioned(w.clone(), pos.clone())
}

/// `alpha * |det A| * base_integral`.
pub fn position_integral(pos: &AffinePosition, base_integral: f64) -> f64 {
    pos.alpha * pos.det.abs() * base_integral
}

/// `(alpha1^beta alpha2^{1-beta}, beta A1 + (1-beta) A2, beta a1 + (1-beta) a2)`.
pub fn interpolate_positions(p1: &AffinePosition, p2: &AffinePosition, beta: f64) -> Result<AffinePosition> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::OutOfDomain {
            value: beta,
            domain: "[0, 1]",
        });
    }
    expect_dim(p1.dim(), p2.dim())?;
    if !p1.positive_definite || !p2.positive_definite {
        return Err(Error::NotPositiveDefinite);
    }
    let alpha = p1.alpha.powf(beta) * p2.alpha.powf(1.0 - beta);
    let matrix = &p1.matrix * beta + &p2.matrix * (1.0 - beta);
    let shift = &p1.shift * beta + &p2.shift * (1.0 - beta);
    AffinePosition::positive(alpha, matrix, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;
    use std::f64::consts::PI;

    #[test]
    fn integral_scaling() {
        let id = AffinePosition::identity(1);
        assert_eq!(position_integral(&id, PI / 2.0), PI / 2.0);
        let p = AffinePosition::new(2.0, Matrix::from_element(1, 1, 3.0), vector(&[0.0])).unwrap();
        assert!((position_integral(&p, PI / 2.0) - 3.0 * PI).abs() < 1e-14);
        let t = AffinePosition::new(std::f64::consts::E, Matrix::identity(2, 2), vector(&[4.0, -1.0])).unwrap();
        assert_eq!(position_integral(&t, 1.0), std::f64::consts::E);
    }

    #[test]
    fn singular_rejected() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            AffinePosition::new(1.0, m, Vector::zeros(2)),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn forward_form_conversion() {
        // alpha w(2x + 1) = alpha w((x - (-1/2)) / (1/2))
        let p = AffinePosition::from_forward_form(1.0, Matrix::from_element(1, 1, 2.0), vector(&[1.0])).unwrap();
        assert!((p.matrix()[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((p.shift()[0] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn interpolation_endpoints_and_minkowski_instance() {
        let p1 = AffinePosition::positive(1.0, Matrix::from_element(1, 1, 1.0), vector(&[0.0])).unwrap();
        let p2 = AffinePosition::positive(1.0, Matrix::from_element(1, 1, 4.0), vector(&[0.0])).unwrap();
        assert_eq!(interpolate_positions(&p1, &p2, 1.0).unwrap(), p1);
        let mid = interpolate_positions(&p1, &p2, 0.5).unwrap();
        assert_eq!(mid.matrix()[(0, 0)], 2.5);
        assert!(position_integral(&mid, 1.0) >= 2.0);
        assert_eq!(interpolate_positions(&p1, &p1, 0.3).unwrap().matrix(), p1.matrix());
    }

    #[test]
    fn compose_and_invert() {
        let p = AffinePosition::new(2.0, Matrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]), vector(&[1.0, -1.0])).unwrap();
        let id = AffinePosition::compose(&p, &p.invert()).unwrap();
        assert!(id.max_entry_diff(&AffinePosition::identity(2)) < 1e-14);
    }

    #[test]
    fn serde_roundtrip() {
        let p = AffinePosition::new(0.1, Matrix::from_row_slice(2, 2, &[1.0 / 3.0, 0.0, 0.0, 7.0]), vector(&[0.2, 0.0])).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: AffinePosition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
