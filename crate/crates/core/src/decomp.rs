//! Decompositions of the identity for functions: points `u_i` in the closed
//! unit ball with weights `c_i > 0` such that
//!
//! ```text
//! sum c_i u_i ⊗ u_i = Id,   sum c_i h(u_i)^2 = 1,   sum c_i u_i = 0,
//! ```
//!
//! where `h` is the height function.

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_dim, expect_dim, hbar_from_sq, random_orthogonal, random_unit, unit, Matrix, Vector, SPHERE_SNAP};
use crate::sampling::{rng, sphere_directions};

/// Default tolerance of [`verify_decomposition`].
pub const DEFAULT_TOL: f64 = 1e-8;

/// Angular clearance between the rotation hyperplane and boundary points.
const HYPERPLANE_CLEARANCE: f64 = 1e-6;
const HYPERPLANE_ATTEMPTS: usize = 100;
const NNLS_MAX_ITERS: usize = 500;
const SAMPLED_DIRECTIONS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalJohnDecomposition {
    points: Vec<Vector>,
    weights: Vec<f64>,
}

impl FunctionalJohnDecomposition {
    /// Checks shapes and the sign of the weights; the identities are left to
    /// [`verify_decomposition`].
    pub fn new(points: Vec<Vector>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDecomposition("no points".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        let d = points[0].len();
        check_dim(d)?;
        let mut snapped = Vec::with_capacity(points.len());
        for u in points {
            expect_dim(d, u.len())?;
            let n = u.norm();
            if !n.is_finite() || n > 1.0 + SPHERE_SNAP {
                return Err(Error::OutsideUnitBall { norm: n });
            }
            snapped.push(if n > 1.0 { u / n } else { u });
        }
        if let Some(c) = weights.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(Error::InvalidDecomposition(format!("weight {c} is not positive")));
        }
        Ok(FunctionalJohnDecomposition {
            points: snapped,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All points strictly inside the unit ball.
    pub fn is_regular(&self) -> bool {
        self.points.iter().all(|u| u.norm() < 1.0 - SPHERE_SNAP)
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn record(&self) -> DecompositionRecord {
        DecompositionRecord {
            dimension: self.dim(),
            entries: self
                .points
                .iter()
                .zip(&self.weights)
                .map(|(u, c)| DecompositionEntry {
                    point: u.iter().copied().collect(),
                    weight: *c,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub point: Vec<f64>,
    pub weight: f64,
}

/// Serialized form: a list of `(point, weight)` records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub dimension: usize,
    pub entries: Vec<DecompositionEntry>,
}

impl DecompositionRecord {
    pub fn to_decomposition(&self) -> Result<FunctionalJohnDecomposition> {
        let points = self
            .entries
            .iter()
            .map(|e| {
                expect_dim(self.dimension, e.point.len())?;
                Ok(Vector::from_column_slice(&e.point))
            })
            .collect::<Result<Vec<_>>>()?;
        FunctionalJohnDecomposition::new(points, self.entries.iter().map(|e| e.weight).collect())
    }
}

impl Serialize for FunctionalJohnDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctionalJohnDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DecompositionRecord::deserialize(d)?
            .to_decomposition()
            .map_err(serde::de::Error::custom)
    }
}

/// Residuals of the three identities and of the weight sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `max |sum c_i u_i u_i^T - Id|` entrywise.
    pub isotropy: f64,
    /// `|sum c_i h(u_i)^2 - 1|`.
    pub height: f64,
    /// `max |sum c_i u_i|` entrywise.
    pub centering: f64,
    /// `|sum c_i - (d + 1)|`.
    pub weight_sum: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Residuals of `dec`; passes iff the three identities hold to `tol` and
/// the weight sum to `(d + 1) tol`.
pub fn verify_decomposition(dec: &FunctionalJohnDecomposition, tol: f64) -> ResidualReport {
    let d = dec.dim();
    let mut iso = -Matrix::identity(d, d);
    let mut height = -1.0;
    let mut center = Vector::zeros(d);
    let mut total = 0.0;
    for (u, &c) in dec.points.iter().zip(&dec.weights) {
        iso += u * u.transpose() * c;
        height += c * hbar_from_sq(u.norm_squared()).powi(2);
        center += u * c;
        total += c;
    }
    let isotropy = iso.amax();
    let height = height.abs();
    let centering = center.amax();
    let weight_sum = (total - (d + 1) as f64).abs();
    let passed = isotropy <= tol && height <= tol && centering <= tol && weight_sum <= (d + 1) as f64 * tol;
    ResidualReport {
        isotropy,
        height,
        centering,
        weight_sum,
        tol,
        passed,
    }
}

/// Projects `±Q e_j` (weights 1/2) onto the first `d` coordinates.
pub fn generate_with_rotation(q: &Matrix) -> Result<FunctionalJohnDecomposition> {
    let n = q.nrows();
    if n < 2 || !q.is_square() {
        return Err(Error::InvalidParameter("rotation must be square of size d + 1 >= 2".into()));
    }
    let d = n - 1;
    check_dim(d)?;
    let orth = (q.transpose() * q - Matrix::identity(n, n)).amax();
    if orth > 1e-10 {
        return Err(Error::InvalidParameter(format!("rotation is not orthogonal (error {orth:e})")));
    }
    let mut points = Vec::with_capacity(2 * n);
    for j in 0..n {
        let col = Vector::from_fn(d, |i, _| q[(i, j)]);
        points.push(col.clone());
        points.push(-col);
    }
    FunctionalJohnDecomposition::new(points, vec![0.5; 2 * n])
}

/// Seeded Haar rotation of the cross-polytope in `R^{d+1}`, projected to `R^d`.
pub fn generate_decomposition(d: usize, seed: u64) -> Result<FunctionalJohnDecomposition> {
    check_dim(d)?;
    let q = random_orthogonal(d + 1, &mut rng(seed));
    generate_with_rotation(&q)
}

/// Lifts to the sphere of `R^{d+1}`, rotates by `1/n` in a plane containing
/// the last axis and projects back.
pub fn regularize_decomposition(dec: &FunctionalJohnDecomposition, n: u64, seed: u64) -> Result<FunctionalJohnDecomposition> {
    let check = verify_decomposition(dec, DEFAULT_TOL);
    if !check.passed {
        return Err(Error::InvalidDecomposition(format!(
            "input fails the identities (residuals {:e}, {:e}, {:e})",
            check.isotropy, check.height, check.centering
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("rotation index n must be positive".into()));
    }
    let d = dec.dim();
    let mut lifted = Vec::with_capacity(2 * dec.len());
    for (u, &c) in dec.points.iter().zip(&dec.weights) {
        let h = hbar_from_sq(u.norm_squared());
        let lift = |sign: f64| {
            let mut v = Vector::zeros(d + 1);
            v.rows_mut(0, d).copy_from(u);
            v[d] = sign * h;
            v
        };
        if h > 0.0 {
            lifted.push((lift(1.0), c / 2.0));
            lifted.push((lift(-1.0), c / 2.0));
        } else {
            lifted.push((lift(0.0), c));
        }
    }

    let boundary: Vec<&Vector> = dec.points.iter().filter(|u| hbar_from_sq(u.norm_squared()) == 0.0).collect();
    let mut g = rng(seed);
    let clearance = HYPERPLANE_CLEARANCE.sin();
    let mut nu = None;
    for _ in 0..HYPERPLANE_ATTEMPTS {
        let cand = random_unit(d, &mut g);
        if boundary.iter().all(|u| cand.dot(u).abs() >= clearance * u.norm()) {
            nu = Some(cand);
            break;
        }
    }
    let nu = nu.ok_or(Error::NoValidHyperplane {
        attempts: HYPERPLANE_ATTEMPTS,
    })?;

    let phi = 1.0 / n as f64;
    let (s, c) = phi.sin_cos();
    let mut axis = Vector::zeros(d + 1);
    axis.rows_mut(0, d).copy_from(&nu);
    let top = unit(d + 1, d);
    let mut points = Vec::with_capacity(lifted.len());
    let mut weights = Vec::with_capacity(lifted.len());
    for (v, w) in lifted {
        let a = v.dot(&axis);
        let b = v[d];
        let rotated = &v + &axis * ((c - 1.0) * a - s * b) + &top * ((c - 1.0) * b + s * a);
        points.push(rotated.rows(0, d).into_owned());
        weights.push(w);
    }
    FunctionalJohnDecomposition::new(points, weights)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullMarginReport {
    /// `min_theta h_K(theta) - 1/(d+1)` for `K = conv{u_i}`.
    pub margin: f64,
    pub min_support: f64,
    pub witness_direction: Vec<f64>,
    /// `"facets"` for exact enumeration, `"sampled"` otherwise.
    pub method: String,
}

fn support(points: &[Vector], theta: &Vector) -> f64 {
    points.iter().map(|u| u.dot(theta)).fold(f64::NEG_INFINITY, f64::max)
}

/// Unit normal to the affine hull of `d` points, if they are affinely independent.
fn facet_normal(pts: &[&Vector]) -> Option<Vector> {
    let d = pts[0].len();
    if d == 1 {
        return Some(Vector::from_element(1, 1.0));
    }
    let mut m = Matrix::zeros(d, d);
    for (r, p) in pts[1..].iter().enumerate() {
        let diff = *p - pts[0];
        m.set_row(r, &diff.transpose());
    }
    let svd = SVD::new(m, false, true);
    let vt = svd.v_t?;
    let sv = &svd.singular_values;
    let smax = sv.max();
    let (imin, _) = sv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
    let rank = sv.iter().filter(|&&s| s > 1e-10 * smax.max(1e-300)).count();
    if rank < d - 1 || smax == 0.0 {
        return None;
    }
    Some(vt.row(imin).transpose().normalize())
}

fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return;
    }
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimum of the hull's support function over a seeded direction set.
pub fn hull_margin_sampled(dec: &FunctionalJohnDecomposition, seed: u64) -> HullMarginReport {
    let d = dec.dim();
    let mut best = (f64::INFINITY, Vector::zeros(d));
    for theta in sphere_directions(d, SAMPLED_DIRECTIONS, seed) {
        let h = support(&dec.points, &theta);
        if h < best.0 {
            best = (h, theta);
        }
    }
    HullMarginReport {
        margin: best.0 - 1.0 / (d + 1) as f64,
        min_support: best.0,
        witness_direction: best.1.iter().copied().collect(),
        method: "sampled".into(),
    }
}

/// Distance-type margin of `conv{u_i}` over the ball of radius `1/(d+1)`.
///
/// Enumerates candidate facets through `d`-subsets of the points; when the
/// origin is interior the minimal support value sits at a facet normal.
/// Falls back to sampled directions if no facet is found.
pub fn hull_ball_margin(dec: &FunctionalJohnDecomposition) -> Result<HullMarginReport> {
    let check = verify_decomposition(dec, DEFAULT_TOL);
    if !check.passed {
        return Err(Error::InvalidDecomposition("hull margin requires a valid decomposition".into()));
    }
    let d = dec.dim();
    let pts = &dec.points;
    let mut best: Option<(f64, Vector)> = None;
    for_each_subset(pts.len(), d, |idx| {
        let sel: Vec<&Vector> = idx.iter().map(|&i| &pts[i]).collect();
        let Some(normal) = facet_normal(&sel) else { return };
        let h0 = normal.dot(sel[0]);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in pts {
            let v = normal.dot(p);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let tol = 1e-12;
        let oriented = if hi <= h0 + tol {
            Some((h0, normal.clone()))
        } else if lo >= h0 - tol {
            Some((-h0, -normal.clone()))
        } else {
            None
        };
        if let Some((h, n)) = oriented {
            if best.as_ref().is_none_or(|(b, _)| h < *b) {
                best = Some((h, n));
            }
        }
    });
    Ok(match best {
        Some((h, n)) if h > 0.0 => HullMarginReport {
            margin: h - 1.0 / (d + 1) as f64,
            min_support: h,
            witness_direction: n.iter().copied().collect(),
            method: "facets".into(),
        },
        _ => hull_margin_sampled(dec, 0),
    })
}

/// Weights fitted to given points, with the residual of the linear system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFit {
    pub weights: Vec<f64>,
    pub residual: f64,
}

/// Lawson–Hanson non-negative least squares `min |A x - b|, x >= 0`.
pub fn nnls(a: &Matrix, b: &Vector) -> Vector {
    let n = a.ncols();
    let mut x = Vector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-12 * (1.0 + a.amax() * b.amax());
    let solve_passive = |passive: &[bool]| -> Vector {
        let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        let mut s = Vector::zeros(n);
        if cols.is_empty() {
            return s;
        }
        let sub = Matrix::from_fn(a.nrows(), cols.len(), |i, k| a[(i, cols[k])]);
        let svd = sub.svd(true, true);
        let eps = 1e-13 * svd.singular_values.max();
        if let Ok(z) = svd.solve(b, eps) {
            for (k, &j) in cols.iter().enumerate() {
                s[j] = z[k];
            }
        }
        s
    };
    for _ in 0..NNLS_MAX_ITERS {
        let w = a.transpose() * (b - a * &x);
        let cand = (0..n).filter(|&j| !passive[j] && w[j] > tol).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = cand else { break };
        passive[j] = true;
        loop {
            let s = solve_passive(&passive);
            let bad: Vec<usize> = (0..n).filter(|&k| passive[k] && s[k] <= 0.0).collect();
            if bad.is_empty() {
                x = s;
                break;
            }
            let step = bad
                .iter()
                .map(|&k| x[k] / (x[k] - s[k]))
                .fold(f64::INFINITY, f64::min);
            x = &x + (s - &x) * step;
            for k in 0..n {
                if passive[k] && x[k] <= 1e-15 {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
        }
    }
    // Among equally good solutions prefer the minimum-norm one: widen the
    // passive set by every column that could enter without increasing the
    // residual and re-solve in the least-squares sense.
    let w = a.transpose() * (b - a * &x);
    let widened: Vec<bool> = (0..n).map(|k| passive[k] || w[k].abs() <= tol).collect();
    if widened != passive {
        let s = solve_passive(&widened);
        let res_x = (a * &x - b).norm();
        if s.iter().all(|&v| v >= 0.0) && (a * &s - b).norm() <= res_x + tol {
            return s;
        }
    }
    x
}

/// Linear system whose non-negative solutions are decomposition weights:
/// upper-triangle entries of the isotropy identity, the height identity and
/// the centering identity.
pub fn identity_system(points: &[Vector]) -> (Matrix, Vector) {
    let d = points[0].len();
    let rows = d * (d + 1) / 2 + 1 + d;
    let mut a = Matrix::zeros(rows, points.len());
    let mut b = Vector::zeros(rows);
    let mut r = 0;
    for i in 0..d {
        for j in i..d {
            for (k, u) in points.iter().enumerate() {
                a[(r, k)] = u[i] * u[j];
            }
            b[r] = if i == j { 1.0 } else { 0.0 };
            r += 1;
        }
    }
    for (k, u) in points.iter().enumerate() {
        a[(r, k)] = hbar_from_sq(u.norm_squared()).powi(2);
    }
    b[r] = 1.0;
    r += 1;
    for i in 0..d {
        for (k, u) in points.iter().enumerate() {
            a[(r + i, k)] = u[i];
        }
    }
    (a, b)
}

/// Non-negative weights making `points` a decomposition, if the residual
/// reaches `target_tol`.
pub fn weights_from_points(points: &[Vector], target_tol: f64) -> Result<WeightFit> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidDecomposition("no points".into()))?;
    let d = first.len();
    check_dim(d)?;
    for u in points {
        expect_dim(d, u.len())?;
        let n = u.norm();
        if n > 1.0 + SPHERE_SNAP {
            return Err(Error::OutsideUnitBall { norm: n });
        }
    }
    let (a, b) = identity_system(points);
    let x = nnls(&a, &b);
    let residual = (&a * &x - &b).norm();
    if residual > target_tol {
        return Err(Error::InfeasibleWeights {
            residual,
            tolerance: target_tol,
        });
    }
    Ok(WeightFit {
        weights: x.iter().copied().collect(),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn two_point() -> FunctionalJohnDecomposition {
        FunctionalJohnDecomposition::new(vec![vector(&[FRAC_1_SQRT_2]), vector(&[-FRAC_1_SQRT_2])], vec![1.0, 1.0]).unwrap()
    }

    fn rotation2(theta: f64) -> Matrix {
        let (s, c) = theta.sin_cos();
        Matrix::from_row_slice(2, 2, &[c, -s, s, c])
    }

    #[test]
    fn two_point_is_exact() {
        let r = verify_decomposition(&two_point(), 1e-15);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn boundary_pair_fails_height_identity() {
        let dec = FunctionalJohnDecomposition::new(vec![vector(&[1.0]), vector(&[-1.0])], vec![0.5, 0.5]).unwrap();
        let r = verify_decomposition(&dec, 1e-8);
        assert_eq!(r.isotropy, 0.0);
        assert_eq!(r.height, 1.0);
        assert!(!r.passed);
        assert!(regularize_decomposition(&dec, 4, 0).is_err());
    }

    #[test]
    fn doubled_weights_fail() {
        let dec = generate_decomposition(2, 5).unwrap();
        let doubled = FunctionalJohnDecomposition::new(dec.points().to_vec(), dec.weights().iter().map(|c| 2.0 * c).collect()).unwrap();
        let r = verify_decomposition(&doubled, 1e-8);
        assert!((r.isotropy - 1.0).abs() < 1e-12);
        assert!(!r.passed);
    }

    #[test]
    fn rotation_example_d1() {
        let theta = 0.3;
        let dec = generate_with_rotation(&rotation2(theta)).unwrap();
        let xs: Vec<f64> = dec.points().iter().map(|u| u[0]).collect();
        let (s, c) = theta.sin_cos();
        for want in [c, -c, s, -s] {
            assert!(xs.iter().any(|x| (x - want).abs() < 1e-15));
        }
        assert!(verify_decomposition(&dec, 1e-15).passed);
        let quarter = generate_with_rotation(&rotation2(FRAC_PI_4)).unwrap();
        assert_eq!(quarter.len(), 4);
        assert!(verify_decomposition(&quarter, 1e-15).passed);
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(generate_decomposition(3, 42).unwrap(), generate_decomposition(3, 42).unwrap());
        assert_ne!(generate_decomposition(3, 42).unwrap(), generate_decomposition(3, 43).unwrap());
    }

    #[test]
    fn regularize_two_point() {
        let out = regularize_decomposition(&two_point(), 4, 1).unwrap();
        assert!(verify_decomposition(&out, 1e-10).passed);
        assert!(out.is_regular());
    }

    #[test]
    fn regularize_boundary_points_become_interior() {
        // Two boundary points (weight 1/2 each) plus interior points.
        let dec = generate_with_rotation(&Matrix::identity(3, 3)).unwrap();
        assert!(!dec.is_regular());
        let out = regularize_decomposition(&dec, 10, 3).unwrap();
        assert!(verify_decomposition(&out, 1e-10).passed);
        assert!(out.is_regular());
    }

    #[test]
    fn regularize_is_continuous_in_n() {
        let dec = generate_decomposition(2, 9).unwrap();
        let out = regularize_decomposition(&dec, 1_000_000, 2).unwrap();
        for v in out.points() {
            let nearest = dec.points().iter().map(|u| (u - v).amax()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-5);
        }
    }

    #[test]
    fn margin_two_point() {
        let r = hull_ball_margin(&two_point()).unwrap();
        assert!((r.margin - (FRAC_1_SQRT_2 - 0.5)).abs() < 1e-12);
        assert_eq!(r.method, "facets");
    }

    #[test]
    fn margin_exact_vs_sampled_and_rotation() {
        for seed in 0..5 {
            let dec = generate_decomposition(2, seed).unwrap();
            let exact = hull_ball_margin(&dec).unwrap();
            let sampled = hull_margin_sampled(&dec, 1);
            assert!(exact.margin >= -1e-9);
            assert!(sampled.margin >= exact.margin - 1e-12);
            assert!(sampled.margin - exact.margin < 2e-3);
            let q = rotation2(0.7);
            let rotated = FunctionalJohnDecomposition::new(dec.points().iter().map(|u| &q * u).collect(), dec.weights().to_vec()).unwrap();
            assert!((hull_ball_margin(&rotated).unwrap().margin - exact.margin).abs() < 1e-9);
        }
    }

    #[test]
    fn weight_recovery() {
        let fit = weights_from_points(two_point().points(), 1e-12).unwrap();
        assert!((fit.weights[0] - 1.0).abs() < 1e-12 && (fit.weights[1] - 1.0).abs() < 1e-12);
        assert!(matches!(
            weights_from_points(&[vector(&[FRAC_1_SQRT_2])], 1e-6),
            Err(Error::InfeasibleWeights { .. })
        ));
        let dec = generate_decomposition(2, 11).unwrap();
        let fit = weights_from_points(dec.points(), 1e-8).unwrap();
        for w in fit.weights {
            assert!((w - 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn serde_roundtrip_exact() {
        let dec = generate_decomposition(3, 1).unwrap();
        let text = serde_json::to_string(&dec).unwrap();
        let back: FunctionalJohnDecomposition = serde_json::from_str(&text).unwrap();
        assert_eq!(back, dec);
    }
}
