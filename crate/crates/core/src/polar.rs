//! Polar functions `f°(p) = inf_{x in supp f} e^{-<p,x>} / f(x)`.
//!
//! The value is `exp(-S(p))` with `S(p) = sup_x (<p,x> + log f(x))`; see
//! [`LogConcaveFunction::log_tilted_sup`] for how `S` is obtained.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcfunc::{LogConcaveFunction, TiltMethod, TiltedSup};
use crate::linalg::{expect_dim, hbar_from_sq, Vector};

/// Polar values below this are reported as `0` with `clamped` set.
pub const UNDERFLOW_CLAMP: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarValue {
    pub value: f64,
    /// `S(p)`; `+inf` when the polar vanishes.
    pub log_support: f64,
    pub clamped: bool,
    pub method: TiltMethod,
}

impl PolarValue {
    fn from_tilt(t: &TiltedSup) -> Self {
        let raw = (-t.value).exp();
        // A finite S means the true value is positive, however small.
        let clamped = raw < UNDERFLOW_CLAMP && t.value.is_finite();
        PolarValue {
            value: if raw < UNDERFLOW_CLAMP { 0.0 } else { raw },
            log_support: t.value,
            clamped,
            method: t.method,
        }
    }
}

/// The polar of a single majorant: a point mass.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarAtom {
    pub location: Vector,
    pub mass: f64,
}

/// `f°(p)`.
pub fn polar_eval(f: &LogConcaveFunction, p: &Vector) -> Result<PolarValue> {
    let t = f.log_tilted_sup(p)?;
    if t.value == f64::NEG_INFINITY {
        return Err(Error::Improper);
    }
    Ok(PolarValue::from_tilt(&t))
}

/// `f°(p)` through multi-start ascent only, bypassing every exact route.
pub fn polar_eval_numeric(f: &LogConcaveFunction, p: &Vector, seed: u64) -> Result<PolarValue> {
    let t = f.numeric_tilted_sup(p, seed)?;
    Ok(PolarValue::from_tilt(&t))
}

/// Location `u / h(u)^2` and mass `exp(-|u|^2 / h(u)^2) / h(u)` of the polar
/// of the majorant anchored at an interior `u`.
pub fn polar_of_ell(u: &Vector) -> Result<PolarAtom> {
    let n2 = u.norm_squared();
    if !n2.is_finite() || n2 >= 1.0 {
        return Err(Error::OutsideUnitBall { norm: n2.sqrt() });
    }
    let h = hbar_from_sq(n2);
    let h2 = h * h;
    Ok(PolarAtom {
        location: u / h2,
        mass: (-n2 / h2).exp() / h,
    })
}

/// `f°(t * direction)` for each `t`.
pub fn improperness_probe(f: &LogConcaveFunction, direction: &Vector, t_values: &[f64]) -> Result<Vec<f64>> {
    expect_dim(f.dim(), direction.len())?;
    let n = direction.norm();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("probe direction must be a unit vector, norm {n}")));
    }
    t_values
        .iter()
        .map(|&t| polar_eval(f, &(direction * t)).map(|v| v.value))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unit, vector};
    use std::f64::consts::{E, SQRT_2};

    #[test]
    fn polar_at_zero_is_reciprocal_sup() {
        let f = LogConcaveFunction::bump(&[vector(&[SQRT_2 / 2.0]), vector(&[-SQRT_2 / 2.0])]).unwrap();
        let v = polar_eval(&f, &vector(&[0.0])).unwrap();
        assert!((v.value - SQRT_2 / E).abs() < 1e-12);
        assert_eq!(v.method, TiltMethod::LinearProgram);
    }

    #[test]
    fn gaussian_closed_form() {
        let g = LogConcaveFunction::gaussian(2).unwrap();
        let p = vector(&[0.6, -0.8]);
        assert!((polar_eval(&g, &p).unwrap().value - (-0.25_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn ell_atoms() {
        let a = polar_of_ell(&vector(&[0.0, 0.0])).unwrap();
        assert_eq!(a.mass, 1.0);
        assert_eq!(a.location, vector(&[0.0, 0.0]));
        let a = polar_of_ell(&vector(&[0.5])).unwrap();
        assert!((a.location[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((a.mass - 2.0 / 3.0_f64.sqrt() * (-1.0_f64 / 3.0).exp()).abs() < 1e-15);
        let b = polar_of_ell(&vector(&[0.5, 0.0])).unwrap();
        assert!((b.mass - a.mass).abs() < 1e-15);
        assert!(polar_of_ell(&vector(&[1.0])).is_err());
    }

    #[test]
    fn half_restricted_gaussian_is_improper() {
        let g = LogConcaveFunction::gaussian(2).unwrap();
        let plus = LogConcaveFunction::half_restriction(g.clone(), unit(2, 0)).unwrap();
        let vals = improperness_probe(&plus, &(-unit(2, 0)), &[1.0, 2.0, 5.0, 10.0]).unwrap();
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let v = improperness_probe(&g, &(-unit(2, 0)), &[2.0]).unwrap();
        assert!((v[0] - (-1.0_f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn height_polar_decays() {
        let h = LogConcaveFunction::height(1).unwrap();
        let vals = improperness_probe(&h, &unit(1, 0), &[1.0, 10.0, 100.0, 1000.0]).unwrap();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(vals[3], 0.0);
    }

    #[test]
    fn underflow_clamps() {
        let h = LogConcaveFunction::height(1).unwrap();
        let v = polar_eval(&h, &vector(&[1e4])).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(v.clamped);
    }
}
