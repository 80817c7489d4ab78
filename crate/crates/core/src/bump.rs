//! Bump functions built over decompositions of the identity.

use serde::{Deserialize, Serialize};

use crate::decomp::{verify_decomposition, FunctionalJohnDecomposition, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::lcfunc::LogConcaveFunction;
use crate::linalg::{hbar_from_sq, Vector};
use crate::sampling::{random_in_ball, rng, sphere_directions};

/// Largest tolerated `log h - log f` on the construction grid.
const CONSTRUCTION_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct JohnBumpFunction {
    decomposition: FunctionalJohnDecomposition,
    function: LogConcaveFunction,
    regular: bool,
    grid_violation: f64,
    grid_points: usize,
}

impl JohnBumpFunction {
    pub fn decomposition(&self) -> &FunctionalJohnDecomposition {
        &self.decomposition
    }

    pub fn function(&self) -> &LogConcaveFunction {
        &self.function
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    /// Largest `log h - log f` seen by the construction check (`<= 0` up to rounding).
    pub fn grid_violation(&self) -> f64 {
        self.grid_violation
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        self.function.eval(x)
    }
}

/// Interior anchors as `(offset, slope)` in plain arrays, for tight loops.
struct AffineTable {
    offsets: Vec<f64>,
    slopes: Vec<f64>,
    boundary: Vec<f64>,
    d: usize,
}

impl AffineTable {
    fn new(f: &LogConcaveFunction, d: usize) -> Self {
        let mut t = AffineTable {
            offsets: vec![],
            slopes: vec![],
            boundary: vec![],
            d,
        };
        let bump = f.as_bump().expect("bump variant");
        for m in bump.majorants() {
            match m.log_affine() {
                Some((o, s)) => {
                    t.offsets.push(o);
                    t.slopes.extend(s.iter());
                }
                None => t.boundary.extend(m.anchor().iter()),
            }
        }
        t
    }

    fn log_value(&self, x: &[f64]) -> f64 {
        let d = self.d;
        for u in self.boundary.chunks(d) {
            let dot: f64 = u.iter().zip(x).map(|(a, b)| a * b).sum();
            if dot >= 1.0 {
                return f64::NEG_INFINITY;
            }
        }
        let mut best = f64::INFINITY;
        for (k, o) in self.offsets.iter().enumerate() {
            let s = &self.slopes[k * d..(k + 1) * d];
            let v = o + s.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            best = best.min(v);
        }
        best
    }
}

/// Largest `log h(x) - log f(x)` over a lattice of the unit ball (`d <= 2`,
/// `1000` nodes per axis) or seeded samples (`d >= 3`, `10^4` points with a
/// fifth of them on the sphere).
fn height_below_check(f: &LogConcaveFunction, d: usize, seed: u64) -> (f64, usize) {
    let table = AffineTable::new(f, d);
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    let mut visit = |x: &[f64]| {
        let n2: f64 = x.iter().map(|v| v * v).sum();
        if n2 >= 1.0 {
            return;
        }
        count += 1;
        let lh = 0.5 * (1.0 - n2).ln();
        worst = worst.max(lh - table.log_value(x));
    };
    if d <= 2 {
        let n = 1000;
        let step = 2.0 / (n - 1) as f64;
        let mut x = [0.0; 2];
        if d == 1 {
            for i in 0..n {
                x[0] = -1.0 + step * i as f64;
                visit(&x[..1]);
            }
        } else {
            for i in 0..n {
                x[0] = -1.0 + step * i as f64;
                for j in 0..n {
                    x[1] = -1.0 + step * j as f64;
                    visit(&x);
                }
            }
        }
    } else {
        let mut g = rng(seed);
        let total = 10_000;
        for _ in 0..total * 4 / 5 {
            let x = random_in_ball(d, 1.0, &mut g);
            visit(x.as_slice());
        }
        for u in sphere_directions(d, total / 5, seed) {
            visit((u * (1.0 - 1e-9)).as_slice());
        }
    }
    (worst, count)
}

/// The bump `min_i l_{u_i}` over the points of a valid decomposition.
pub fn bump_from_decomposition(dec: &FunctionalJohnDecomposition) -> Result<JohnBumpFunction> {
    let check = verify_decomposition(dec, DEFAULT_TOL);
    if !check.passed {
        return Err(Error::InvalidDecomposition(format!(
            "residuals (isotropy {:e}, height {:e}, centering {:e}) exceed {:e}",
            check.isotropy, check.height, check.centering, DEFAULT_TOL
        )));
    }
    let function = LogConcaveFunction::bump(dec.points())?;
    let d = dec.dim();
    let (grid_violation, grid_points) = height_below_check(&function, d, 0);
    if grid_violation > CONSTRUCTION_SLACK {
        return Err(Error::InvalidDecomposition(format!(
            "height function exceeds the bump on the construction grid by {grid_violation:e}"
        )));
    }
    Ok(JohnBumpFunction {
        decomposition: dec.clone(),
        regular: dec.is_regular(),
        function,
        grid_violation,
        grid_points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormGapRecord {
    pub sup_norm: f64,
    /// `e^d - sup_norm`.
    pub gap: f64,
    /// `e^{-d} prod h(u_i)^{-c_i h(u_i)^2}`, a lower bound on `f°(0)`.
    pub polar_zero_lower_bound: f64,
    pub within_exponential_bound: bool,
    pub within_polar_bound: bool,
}

/// Exact sup norm and its gap to `e^d`, plus the analytic bound on `f°(0)`.
pub fn norm_gap_probe(bf: &JohnBumpFunction) -> Result<NormGapRecord> {
    if !bf.regular {
        return Err(Error::NonRegularBump);
    }
    let d = bf.dim() as f64;
    let sup_norm = bf.function.sup_norm()?;
    let dec = &bf.decomposition;
    let log_bound = -d - dec
        .points()
        .iter()
        .zip(dec.weights())
        .map(|(u, c)| {
            let h2 = hbar_from_sq(u.norm_squared()).powi(2);
            c * h2 * 0.5 * h2.ln()
        })
        .sum::<f64>();
    let bound = log_bound.exp();
    let e_d = d.exp();
    Ok(NormGapRecord {
        sup_norm,
        gap: e_d - sup_norm,
        polar_zero_lower_bound: bound,
        within_exponential_bound: sup_norm <= e_d,
        within_polar_bound: sup_norm <= 1.0 / bound + 1e-9,
    })
}
