//! Dense two-phase simplex for small linear programs with free variables.
//!
//! Solves `maximize c·z subject to A z <= b` with `z` unrestricted in sign.
//! Free variables are split as `z = z⁺ - z⁻`; rows with negative right-hand
//! side receive an artificial variable for phase one. Pivoting follows
//! Bland's rule, so the method terminates on degenerate problems.

use nalgebra::{DMatrix, DVector};

const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { z: Vec<f64>, value: f64 },
    Unbounded,
    Infeasible,
    IterationLimit,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
}

enum PhaseStatus {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Runs primal simplex iterations for `cost` over columns `< allowed`.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> PhaseStatus {
        for _ in 0..MAX_PIVOTS {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.rows)
                        .map(|(&b, row)| cost[b] * row[j])
                        .sum::<f64>();
                reduced > PIVOT_EPS
            });
            let Some(col) = entering else {
                return PhaseStatus::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-14
                                || (ratio <= lr + 1e-14 && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return PhaseStatus::Unbounded,
                Some((r, _)) => self.pivot(r, col),
            }
        }
        PhaseStatus::IterationLimit
    }
}

/// Maximizes `c·z` subject to `a z <= b` over free `z`.
///
/// `a` is given row-major, one inner vector per constraint.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m, "rhs length must match constraint count");
    if m == 0 {
        return if c.iter().all(|&v| v == 0.0) {
            LpOutcome::Optimal {
                z: vec![0.0; n],
                value: 0.0,
            }
        } else {
            LpOutcome::Unbounded
        };
    }

    let needs_art: Vec<bool> = b.iter().map(|&v| v < 0.0).collect();
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let slack0 = 2 * n;
    let art0 = slack0 + m;
    let ncols = art0 + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = art0;
    for i in 0..m {
        assert_eq!(a[i].len(), n, "constraint row has wrong length");
        let sign = if needs_art[i] { -1.0 } else { 1.0 };
        let mut row = vec![0.0; ncols + 1];
        for j in 0..n {
            row[j] = sign * a[i][j];
            row[n + j] = -sign * a[i][j];
        }
        row[slack0 + i] = sign;
        row[ncols] = sign * b[i];
        if needs_art[i] {
            row[next_art] = 1.0;
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(slack0 + i);
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, ncols };

    if n_art > 0 {
        let mut phase1 = vec![0.0; ncols];
        for v in phase1.iter_mut().skip(art0) {
            *v = -1.0;
        }
        match tab.optimize(&phase1, ncols) {
            PhaseStatus::Optimal => {}
            PhaseStatus::Unbounded => unreachable!("phase one objective is bounded"),
            PhaseStatus::IterationLimit => return LpOutcome::IterationLimit,
        }
        let infeas: f64 = tab
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &bv)| bv >= art0)
            .map(|(i, _)| tab.rhs(i))
            .sum();
        let scale = 1.0 + b.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if infeas > 1e-9 * scale {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis where possible.
        for i in 0..m {
            if tab.basis[i] >= art0 {
                if let Some(j) = (0..art0).find(|&j| tab.rows[i][j].abs() > 1e-9) {
                    tab.pivot(i, j);
                }
            }
        }
    }

    let mut cost = vec![0.0; ncols];
    for j in 0..n {
        cost[j] = c[j];
        cost[n + j] = -c[j];
    }
    match tab.optimize(&cost, art0) {
        PhaseStatus::Optimal => {}
        PhaseStatus::Unbounded => return LpOutcome::Unbounded,
        PhaseStatus::IterationLimit => return LpOutcome::IterationLimit,
    }

    let mut split = vec![0.0; 2 * n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < 2 * n {
            split[bv] = tab.rhs(i);
        }
    }
    let z: Vec<f64> = (0..n).map(|j| split[j] - split[n + j]).collect();
    let z = refine_vertex(c, a, b, z);
    let value = c.iter().zip(&z).map(|(ci, zi)| ci * zi).sum();
    LpOutcome::Optimal { z, value }
}

/// Re-solves the active constraints of a simplex vertex to recover digits
/// lost in tableau updates. Falls back to the input when the active set does
/// not determine the point or the refined point is worse.
fn refine_vertex(c: &[f64], a: &[Vec<f64>], b: &[f64], z: Vec<f64>) -> Vec<f64> {
    let n = c.len();
    let slack = |z: &[f64], i: usize| b[i] - a[i].iter().zip(z).map(|(x, y)| x * y).sum::<f64>();
    let active: Vec<usize> = (0..a.len())
        .filter(|&i| slack(&z, i).abs() <= 1e-8 * (1.0 + b[i].abs()))
        .collect();
    if active.len() < n {
        return z;
    }
    let mat = DMatrix::from_fn(active.len(), n, |r, col| a[active[r]][col]);
    let rhs = DVector::from_fn(active.len(), |r, _| b[active[r]]);
    let svd = mat.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.iter().filter(|&&s| s > 1e-9 * smax).count() < n {
        return z;
    }
    let Ok(refined) = svd.solve(&rhs, 1e-12 * smax) else {
        return z;
    };
    let refined: Vec<f64> = refined.iter().copied().collect();
    let feasible = (0..a.len()).all(|i| slack(&refined, i) >= -1e-10 * (1.0 + b[i].abs()));
    let obj = |z: &[f64]| c.iter().zip(z).map(|(x, y)| x * y).sum::<f64>();
    if feasible && obj(&refined) >= obj(&z) - 1e-9 * (1.0 + obj(&z).abs()) {
        refined
    } else {
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_problem() {
        // max x + y, x <= 1, y <= 2, -x <= 0, -y <= 0
        let out = maximize(
            &[1.0, 1.0],
            &[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
            &[1.0, 2.0, 0.0, 0.0],
        );
        assert_eq!(out.value(), Some(3.0));
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // max -x subject to -x <= -3 (x >= 3), x <= 10
        let out = maximize(&[-1.0], &[vec![-1.0], vec![1.0]], &[-3.0, 10.0]);
        match out {
            LpOutcome::Optimal { z, value } => {
                assert!((z[0] - 3.0).abs() < 1e-12);
                assert!((value + 3.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_unbounded() {
        assert_eq!(maximize(&[1.0], &[vec![-1.0]], &[0.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn detects_infeasible() {
        // x <= -1 and -x <= -1 (x >= 1)
        assert_eq!(
            maximize(&[0.0], &[vec![1.0], vec![-1.0]], &[-1.0, -1.0]),
            LpOutcome::Infeasible
        );
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Many redundant constraints through the same vertex.
        let a = vec![
            vec![1.0, 1.0],
            vec![2.0, 2.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 2.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ];
        let b = vec![1.0, 2.0, 1.0, 1.0, 1.0, 0.0, 0.0];
        let out = maximize(&[1.0, 1.0], &a, &b);
        assert!((out.value().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_variables_negative_optimum() {
        // max t s.t. t <= -2 - x, t <= -2 + x  => x = 0, t = -2
        let out = maximize(&[0.0, 1.0], &[vec![1.0, 1.0], vec![-1.0, 1.0]], &[-2.0, -2.0]);
        match out {
            LpOutcome::Optimal { z, value } => {
                assert!(z[0].abs() < 1e-12);
                assert!((value + 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }
}
