use serde::{Deserialize, Serialize};

use crate::linalg::Vector;
use crate::position::AffinePosition;

/// Counters and residuals collected while solving.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub outer_iterations: usize,
    pub newton_iterations: usize,
    pub constraint_points: usize,
    pub restarts: usize,
    /// Largest `log g - log f` seen by the final certification pass.
    pub max_violation: f64,
    pub certification_points: usize,
    /// Certified objective after each outer iteration.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
}

/// Outcome of a John-type solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub position: AffinePosition,
    /// `log alpha + log det A`.
    pub objective: f64,
    pub feasible: bool,
    pub contacts: Vec<Vec<f64>>,
    pub recovered_weights: Option<Vec<f64>>,
    pub nnls_residual: Option<f64>,
    /// The search ranges over symmetric positive definite `A` only.
    pub positive_definite_restriction: bool,
    /// Height pinned by a fixed-height solve.
    pub pinned_alpha: Option<f64>,
    pub diagnostics: SolveDiagnostics,
}

impl SolveReport {
    pub fn contact_vectors(&self) -> Vec<Vector> {
        self.contacts.iter().map(|c| Vector::from_column_slice(c)).collect()
    }
}
