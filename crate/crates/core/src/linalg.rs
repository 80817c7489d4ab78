//! Small dense linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Largest ambient dimension accepted anywhere in the crate.
pub const MAX_DIM: usize = 8;

/// Norms within this distance of 1 are treated as lying on the unit sphere.
pub const SPHERE_SNAP: f64 = 1e-12;

pub fn check_dim(d: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(d))
    }
}

pub fn expect_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// The height function of the unit ball one dimension up:
/// `sqrt(1 - |x|^2)` inside the ball, `0` outside.
pub fn hbar(x: &Vector) -> f64 {
    hbar_from_sq(x.norm_squared())
}

pub fn hbar_from_sq(norm_sq: f64) -> f64 {
    if norm_sq < 1.0 {
        (1.0 - norm_sq).sqrt()
    } else {
        0.0
    }
}

pub fn vector(coords: &[f64]) -> Vector {
    Vector::from_column_slice(coords)
}

pub fn unit(d: usize, k: usize) -> Vector {
    let mut e = Vector::zeros(d);
    e[k] = 1.0;
    e
}

pub fn all_finite(v: &Vector) -> bool {
    v.iter().all(|c| c.is_finite())
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn is_symmetric(a: &Matrix, tol: f64) -> bool {
    a.is_square() && {
        let n = a.nrows();
        (0..n).all(|i| (0..i).all(|j| (a[(i, j)] - a[(j, i)]).abs() <= tol * (1.0 + a[(i, j)].abs())))
    }
}

/// Symmetric positive definiteness by attempting a Cholesky factorization.
pub fn is_positive_definite(a: &Matrix) -> bool {
    is_symmetric(a, 1e-10) && a.clone().cholesky().is_some()
}

/// Haar-distributed orthogonal matrix of size `n`, drawn from `rng`.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let g = Matrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Uniformly distributed unit vector in `R^d`.
pub fn random_unit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vector {
    loop {
        let v = Vector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Random symmetric positive definite matrix with eigenvalues drawn
/// uniformly from `[lo, hi]`.
pub fn random_spd<R: Rng + ?Sized>(d: usize, lo: f64, hi: f64, rng: &mut R) -> Matrix {
    let q = random_orthogonal(d, rng);
    let eig = Vector::from_fn(d, |_, _| rng.random_range(lo..=hi));
    let a = &q * Matrix::from_diagonal(&eig) * q.transpose();
    symmetrize(&a)
}

pub fn symmetrize(a: &Matrix) -> Matrix {
    (a + a.transpose()) * 0.5
}

/// Number of entries of the upper triangle (diagonal included).
pub fn vech_len(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Index pairs `(i, j)` with `i <= j` in the order used by [`vech`].
pub fn vech_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(vech_len(d));
    for i in 0..d {
        for j in i..d {
            out.push((i, j));
        }
    }
    out
}

pub fn vech(a: &Matrix) -> Vec<f64> {
    vech_pairs(a.nrows()).into_iter().map(|(i, j)| a[(i, j)]).collect()
}

pub fn unvech(d: usize, values: &[f64]) -> Matrix {
    let mut a = Matrix::zeros(d, d);
    for (k, (i, j)) in vech_pairs(d).into_iter().enumerate() {
        a[(i, j)] = values[k];
        a[(j, i)] = values[k];
    }
    a
}

/// Lexicographic comparison used for deterministic tie-breaking.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hbar_values() {
        assert_eq!(hbar(&vector(&[0.0])), 1.0);
        assert_eq!(hbar(&vector(&[1.0, 0.0])), 0.0);
        assert_eq!(hbar(&vector(&[3.0])), 0.0);
        assert!((hbar(&vector(&[0.5, 0.0])) - 0.75_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn random_orthogonal_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            let q = random_orthogonal(n, &mut rng);
            let err = max_abs(&(q.transpose() * &q - Matrix::identity(n, n)));
            assert!(err < 1e-13, "n={n} err={err}");
        }
    }

    #[test]
    fn vech_roundtrip() {
        let a = Matrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 5.0, 3.0, 5.0, 6.0]);
        assert_eq!(unvech(3, &vech(&a)), a);
    }

    #[test]
    fn random_spd_is_pd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_spd(3, 0.5, 2.0, &mut rng);
        assert!(is_positive_definite(&a));
    }
}
