use crate::error::{Error, Result};
use crate::linalg::{hbar_from_sq, Vector, SPHERE_SNAP};

/// Log-affine majorant of the height function touching it at `anchor`.
///
/// For an interior anchor `u` the function is
/// `h(u) * exp(-<u, x - u> / h(u)^2)` with `h` the height function. For a
/// unit anchor it is the extended-valued indicator that is `0` on
/// `{<x,u> >= 1}` and `+inf` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct LogAffineMajorant {
    anchor: Vector,
    height: f64,
    boundary: bool,
}

/// Builds the majorant anchored at `u`, snapping norms within `1e-12` of one
/// onto the sphere.
pub fn ell_majorant(u: &Vector) -> Result<LogAffineMajorant> {
    let norm = u.norm();
    if !norm.is_finite() || norm > 1.0 + SPHERE_SNAP {
        return Err(Error::OutsideUnitBall { norm });
    }
    if (1.0 - norm).abs() <= SPHERE_SNAP {
        return Ok(LogAffineMajorant {
            anchor: u / norm,
            height: 0.0,
            boundary: true,
        });
    }
    Ok(LogAffineMajorant {
        anchor: u.clone(),
        height: hbar_from_sq(u.norm_squared()),
        boundary: false,
    })
}

impl LogAffineMajorant {
    pub fn anchor(&self) -> &Vector {
        &self.anchor
    }

    /// Height function at the anchor (zero for unit anchors).
    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn is_boundary(&self) -> bool {
        self.boundary
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    /// Gradient `u / h(u)^2` of the exponent; `None` for unit anchors.
    pub fn slope(&self) -> Option<Vector> {
        (!self.boundary).then(|| &self.anchor / (self.height * self.height))
    }

    /// `(offset, slope)` with `log l(x) = offset + <slope, x>` for interior anchors.
    pub fn log_affine(&self) -> Option<(f64, Vector)> {
        if self.boundary {
            return None;
        }
        let h2 = self.height * self.height;
        let offset = self.height.ln() + self.anchor.norm_squared() / h2;
        Some((offset, -&self.anchor / h2))
    }

    pub fn log_value(&self, x: &Vector) -> f64 {
        if self.boundary {
            if x.dot(&self.anchor) >= 1.0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else {
            let h2 = self.height * self.height;
            self.height.ln() - self.anchor.dot(&(x - &self.anchor)) / h2
        }
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        self.log_value(x).exp()
    }
}

/// `t^{-t}` on `[0, 1]` with the continuous extension `zeta(0) = 1`.
pub fn zeta(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfDomain {
            value: t,
            domain: "[0, 1]",
        });
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    Ok((-t * t.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;

    #[test]
    fn origin_anchor_is_constant_one() {
        let l = ell_majorant(&vector(&[0.0, 0.0])).unwrap();
        for x in [[0.0, 0.0], [3.0, -1.0], [-10.0, 7.5]] {
            assert_eq!(l.eval(&vector(&x)), 1.0);
        }
    }

    #[test]
    fn unit_anchor_branches() {
        let l = ell_majorant(&vector(&[1.0])).unwrap();
        assert!(l.is_boundary());
        assert_eq!(l.eval(&vector(&[1.0])), 0.0);
        assert_eq!(l.eval(&vector(&[2.0])), 0.0);
        assert_eq!(l.eval(&vector(&[0.999])), f64::INFINITY);
    }

    #[test]
    fn half_anchor_in_plane() {
        let u = vector(&[0.5, 0.0]);
        let l = ell_majorant(&u).unwrap();
        assert!((l.eval(&u) - 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
        let s = l.slope().unwrap();
        assert!((s[0] - 2.0 / 3.0).abs() < 1e-15 && s[1] == 0.0);
    }

    #[test]
    fn snapping_and_rejection() {
        assert!(ell_majorant(&vector(&[1.0 + 5e-13])).unwrap().is_boundary());
        assert!(matches!(
            ell_majorant(&vector(&[1.01])),
            Err(Error::OutsideUnitBall { .. })
        ));
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta(0.0).unwrap(), 1.0);
        assert_eq!(zeta(1.0).unwrap(), 1.0);
        assert!((zeta(0.5).unwrap() - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(zeta(1.5).is_err());
        assert!(zeta(-0.1).is_err());
    }

    #[test]
    fn zeta_at_least_one_with_equality_only_at_ends() {
        for k in 0..=10_000 {
            let t = k as f64 / 10_000.0;
            let z = zeta(t).unwrap();
            assert!(z >= 1.0);
            if z - 1.0 <= 1e-9 {
                assert!(t <= 1e-9 || t >= 1.0 - 1e-9, "near-one value at t={t}");
            }
        }
    }
}
