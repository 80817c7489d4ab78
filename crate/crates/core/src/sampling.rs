//! Deterministic point sets: lattices in balls, spherical direction sets,
//! random points in balls and the Halton sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{random_unit, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Points of the regular lattice with `n` nodes per axis on
/// `[-radius, radius]^d` that fall inside the closed ball of `radius`.
pub fn ball_lattice(d: usize, radius: f64, n: usize) -> Vec<Vector> {
    assert!(n >= 2, "lattice needs at least two nodes per axis");
    let step = 2.0 * radius / (n - 1) as f64;
    let total = n.pow(d as u32);
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        let x = Vector::from_fn(d, |k, _| -radius + step * idx[k] as f64);
        if x.norm() <= radius * (1.0 + 1e-12) {
            out.push(x);
        }
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    out
}

/// Lattice plus boundary samples with roughly `target` points in total.
///
/// In one dimension this is exactly `target` evenly spaced points including
/// both endpoints. In higher dimensions about a fifth of the budget goes to
/// the bounding sphere, where minima of quasi-concave functions sit.
pub fn ball_grid(d: usize, radius: f64, target: usize) -> Vec<Vector> {
    if d == 1 {
        let n = target.max(2);
        return (0..n)
            .map(|k| Vector::from_element(1, -radius + 2.0 * radius * k as f64 / (n - 1) as f64))
            .collect();
    }
    let on_sphere = (target / 5).max(2 * d);
    let inner_target = target.saturating_sub(on_sphere).max(1);
    let mut n = 2;
    let mut lattice = ball_lattice(d, radius, n);
    while lattice.len() < inner_target {
        n += 1;
        lattice = ball_lattice(d, radius, n);
    }
    lattice.extend(sphere_directions(d, on_sphere, 0).into_iter().map(|u| u * radius));
    lattice
}

/// A well-spread set of unit vectors.
///
/// `d = 1` gives `{+1, -1}`; `d = 2` gives `n` equally spaced angles;
/// `d = 3` a Fibonacci sphere; higher dimensions fall back to seeded
/// Gaussian directions.
pub fn sphere_directions(d: usize, n: usize, seed: u64) -> Vec<Vector> {
    match d {
        1 => vec![Vector::from_element(1, 1.0), Vector::from_element(1, -1.0)],
        2 => (0..n)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Vector::from_column_slice(&[th.cos(), th.sin()])
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
            (0..n)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let th = golden * k as f64;
                    Vector::from_column_slice(&[r * th.cos(), r * th.sin(), z])
                })
                .collect()
        }
        _ => {
            let mut g = rng(seed);
            (0..n).map(|_| random_unit(d, &mut g)).collect()
        }
    }
}

/// Uniform point in the ball of `radius` centred at the origin.
pub fn random_in_ball<R: Rng + ?Sized>(d: usize, radius: f64, rng: &mut R) -> Vector {
    let u = random_unit(d, rng);
    let r: f64 = rng.random::<f64>().powf(1.0 / d as f64);
    u * (radius * r)
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    out
}

/// `k`-th Halton point in `[0,1)^d` (d ≤ 8).
pub fn halton(k: u64, d: usize) -> Vec<f64> {
    (0..d).map(|j| radical_inverse(k + 1, PRIMES[j])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_counts() {
        assert_eq!(ball_lattice(1, 1.0, 11).len(), 11);
        let pts = ball_lattice(2, 1.0, 21);
        assert!(pts.iter().all(|p| p.norm() <= 1.0 + 1e-12));
        // area ratio pi/4 of 441 nodes, roughly
        assert!(pts.len() > 300 && pts.len() < 441);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(ball_grid(1, 0.5, 1000).len(), 1000);
        for d in 2..=3 {
            let g = ball_grid(d, 0.25, 1000);
            assert!(g.len() >= 1000 && g.len() < 2000, "d={d} len={}", g.len());
            assert!(g.iter().all(|p| p.norm() <= 0.25 + 1e-12));
        }
    }

    #[test]
    fn directions_are_unit() {
        for d in 1..=5 {
            for u in sphere_directions(d, 64, 1) {
                assert!((u.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn halton_first_points() {
        assert_eq!(halton(0, 2), vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton(1, 1), vec![0.25]);
    }
}
