//! Radial log-concave profiles centred at the origin.
//!
//! Each profile `L(x) = exp(-phi(|x|))` with `phi` convex and nondecreasing
//! knows its tilted support value `S(rho) = sup_r (rho r - phi(r))`, which is
//! what the polar function needs: `L°(p) = exp(-S(|p|))`.

use statrs::function::gamma::gamma;
use std::f64::consts::PI;

use crate::quadrature::integrate_1d;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radial {
    /// `(1 - r^2)^{s/2}` on the unit ball.
    HeightPower { s: f64 },
    /// `exp(-r^2)`.
    Gaussian,
    /// `exp(-r^p)`, `p >= 1`.
    ExpNorm { p: f64 },
    /// Polar function of `HeightPower { s }`.
    PolarHeightPower { s: f64 },
    /// Indicator of the ball of the given radius.
    Ball { radius: f64 },
}

/// Maximizer of `rho r + (s/2) ln(1 - r^2)` over `r in [0, 1)`, together
/// with `1 - r` computed without cancellation.
pub(crate) fn height_power_maximizer(rho: f64, s: f64) -> (f64, f64) {
    if rho == 0.0 {
        return (0.0, 1.0);
    }
    let q = (s * s + 4.0 * rho * rho).sqrt();
    let r = 2.0 * rho / (s + q);
    let one_minus = (s + s * s / (q + 2.0 * rho)) / (s + q);
    (r, one_minus)
}

fn height_power_support(rho: f64, s: f64) -> f64 {
    let (r, one_minus) = height_power_maximizer(rho, s);
    rho * r + 0.5 * s * (one_minus * (1.0 + r)).ln()
}

/// Derivative of the maximizer with respect to `rho`.
pub(crate) fn height_power_maximizer_slope(rho: f64, s: f64) -> f64 {
    let q = (s * s + 4.0 * rho * rho).sqrt();
    (2.0 * (s + q) - 8.0 * rho * rho / q) / ((s + q) * (s + q))
}

pub(crate) fn unit_ball_volume(d: usize) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0 + 1.0)
}

impl Radial {
    /// `ln L` as a function of the radius.
    pub fn log_profile(&self, r: f64) -> f64 {
        match *self {
            Radial::HeightPower { s } => {
                if r < 1.0 {
                    0.5 * s * ((1.0 - r) * (1.0 + r)).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Radial::Gaussian => -r * r,
            Radial::ExpNorm { p } => -r.powf(p),
            Radial::PolarHeightPower { s } => -height_power_support(r, s),
            Radial::Ball { radius } => {
                if r <= radius {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `S(rho) = sup_{r >= 0} (rho r + ln L(r))`, possibly `+inf`.
    pub fn support(&self, rho: f64) -> f64 {
        match *self {
            Radial::HeightPower { s } => height_power_support(rho, s),
            Radial::Gaussian => rho * rho / 4.0,
            Radial::ExpNorm { p } => {
                if p == 1.0 {
                    if rho <= 1.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (p - 1.0) * (rho / p).powf(p / (p - 1.0))
                }
            }
            Radial::PolarHeightPower { s } => {
                if rho < 1.0 {
                    -0.5 * s * ((1.0 - rho) * (1.0 + rho)).ln()
                } else {
                    f64::INFINITY
                }
            }
            Radial::Ball { radius } => rho * radius,
        }
    }

    /// Radius attaining [`Radial::support`], `None` when the supremum is
    /// infinite or not attained.
    pub fn support_maximizer(&self, rho: f64) -> Option<f64> {
        match *self {
            Radial::HeightPower { s } => Some(height_power_maximizer(rho, s).0),
            Radial::Gaussian => Some(rho / 2.0),
            Radial::ExpNorm { p } => {
                if p == 1.0 {
                    (rho <= 1.0).then_some(0.0)
                } else {
                    Some((rho / p).powf(1.0 / (p - 1.0)))
                }
            }
            // The conjugate of the conjugate: the tilt `r` at which the
            // height-power maximizer equals `rho`.
            Radial::PolarHeightPower { s } => (rho < 1.0).then(|| s * rho / ((1.0 - rho) * (1.0 + rho))),
            Radial::Ball { radius } => Some(if rho > 0.0 { radius } else { 0.0 }),
        }
    }

    /// Radius of the support, `inf` for full support.
    pub fn support_radius(&self) -> f64 {
        match *self {
            Radial::HeightPower { .. } => 1.0,
            Radial::Ball { radius } => radius,
            _ => f64::INFINITY,
        }
    }

    /// First and second derivative of `ln L` in the radius, at `r > 0`.
    pub fn log_profile_derivatives(&self, r: f64) -> (f64, f64) {
        match *self {
            Radial::HeightPower { s } => {
                if r >= 1.0 {
                    return (0.0, 0.0);
                }
                let q = 1.0 - r * r;
                (-s * r / q, -s * (1.0 + r * r) / (q * q))
            }
            Radial::Gaussian => (-2.0 * r, -2.0),
            Radial::ExpNorm { p } => (-p * r.powf(p - 1.0), -p * (p - 1.0) * r.powf(p - 2.0)),
            Radial::PolarHeightPower { s } => {
                let (m, _) = height_power_maximizer(r, s);
                (-m, -height_power_maximizer_slope(r, s))
            }
            Radial::Ball { .. } => (0.0, 0.0),
        }
    }

    /// Limit of `(ln L)'(r) / r` as `r -> 0`, the curvature at the origin.
    pub fn curvature_at_origin(&self) -> f64 {
        match *self {
            Radial::HeightPower { s } => -s,
            Radial::Gaussian => -2.0,
            Radial::ExpNorm { p } => {
                if p == 2.0 {
                    -2.0
                } else {
                    0.0
                }
            }
            Radial::PolarHeightPower { s } => -1.0 / s,
            Radial::Ball { .. } => 0.0,
        }
    }

    /// `∫_{R^d} L`.
    pub fn integral(&self, d: usize) -> f64 {
        let df = d as f64;
        match *self {
            Radial::HeightPower { s } => {
                PI.powf(df / 2.0) * gamma(s / 2.0 + 1.0) / gamma(df / 2.0 + s / 2.0 + 1.0)
            }
            Radial::Gaussian => PI.powf(df / 2.0),
            Radial::ExpNorm { p } => unit_ball_volume(d) * gamma(df / p + 1.0),
            Radial::Ball { radius } => unit_ball_volume(d) * radius.powi(d as i32),
            Radial::PolarHeightPower { .. } => {
                // Shell integration; the profile decays like e^{-r}.
                let mut upper = 1.0;
                while self.log_profile(upper) + (df - 1.0) * upper.ln() > -60.0 {
                    upper *= 2.0;
                }
                let shell = df * unit_ball_volume(d);
                let est = integrate_1d(
                    |r| r.powi(d as i32 - 1) * self.log_profile(r).exp(),
                    0.0,
                    upper,
                    1e-14,
                    1e-12,
                );
                shell * est.value
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_support(profile: Radial, rho: f64, rmax: f64) -> f64 {
        let n = 200_000;
        (0..=n)
            .map(|k| {
                let r = rmax * k as f64 / n as f64;
                rho * r + profile.log_profile(r)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn supports_match_grid_maximization() {
        let cases = [
            (Radial::HeightPower { s: 1.0 }, 0.7, 1.0),
            (Radial::HeightPower { s: 2.5 }, 3.0, 1.0),
            (Radial::Gaussian, 1.3, 10.0),
            (Radial::ExpNorm { p: 3.0 }, 2.0, 5.0),
            (Radial::ExpNorm { p: 1.0 }, 0.5, 50.0),
            (Radial::PolarHeightPower { s: 1.0 }, 0.6, 40.0),
            (Radial::Ball { radius: 2.0 }, 1.5, 2.0),
        ];
        for (profile, rho, rmax) in cases {
            let exact = profile.support(rho);
            let grid = grid_support(profile, rho, rmax);
            assert!(exact >= grid - 1e-12, "{profile:?}");
            assert!(exact - grid < 1e-6, "{profile:?}: {exact} vs {grid}");
        }
    }

    #[test]
    fn maximizers_attain_support() {
        let cases = [
            Radial::HeightPower { s: 1.0 },
            Radial::HeightPower { s: 3.0 },
            Radial::Gaussian,
            Radial::ExpNorm { p: 1.5 },
            Radial::PolarHeightPower { s: 2.0 },
        ];
        for prof in cases {
            for rho in [0.0, 0.3, 0.8] {
                let r = prof.support_maximizer(rho).unwrap();
                let at = rho * r + prof.log_profile(r);
                assert!((at - prof.support(rho)).abs() < 1e-12, "{prof:?} rho={rho}");
            }
        }
        assert_eq!(Radial::ExpNorm { p: 1.0 }.support_maximizer(1.5), None);
    }

    #[test]
    fn polar_of_polar_height_is_height() {
        // Conjugating twice returns the original log-profile.
        let p = Radial::PolarHeightPower { s: 1.0 };
        for rho in [0.0, 0.2, 0.5, 0.9] {
            let back = p.support(rho);
            let h = Radial::HeightPower { s: 1.0 }.log_profile(rho);
            assert!((back + h).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_checks() {
        let profiles = [
            Radial::HeightPower { s: 1.5 },
            Radial::Gaussian,
            Radial::ExpNorm { p: 1.7 },
            Radial::PolarHeightPower { s: 0.8 },
        ];
        for prof in profiles {
            for r in [0.1, 0.35, 0.6] {
                let h = 1e-5;
                let (g, c) = prof.log_profile_derivatives(r);
                let fd1 = (prof.log_profile(r + h) - prof.log_profile(r - h)) / (2.0 * h);
                let fd2 = (prof.log_profile(r + h) - 2.0 * prof.log_profile(r) + prof.log_profile(r - h)) / (h * h);
                assert!((g - fd1).abs() < 1e-7, "{prof:?} r={r}");
                assert!((c - fd2).abs() < 1e-3, "{prof:?} r={r}: {c} vs {fd2}");
            }
        }
    }

    #[test]
    fn closed_form_integrals() {
        assert!((Radial::HeightPower { s: 1.0 }.integral(1) - PI / 2.0).abs() < 1e-14);
        assert!((Radial::HeightPower { s: 1.0 }.integral(2) - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((Radial::ExpNorm { p: 1.0 }.integral(1) - 2.0).abs() < 1e-14);
        assert!((Radial::ExpNorm { p: 2.0 }.integral(3) - PI.powf(1.5)).abs() < 1e-12);
        assert!((Radial::Ball { radius: 1.0 }.integral(2) - PI).abs() < 1e-14);
    }

    #[test]
    fn polar_height_integral_d1_by_quadrature() {
        let prof = Radial::PolarHeightPower { s: 1.0 };
        let direct = integrate_1d(|x: f64| prof.log_profile(x.abs()).exp(), -80.0, 80.0, 1e-13, 1e-12);
        assert!((prof.integral(1) - direct.value).abs() < 1e-9);
    }
}
