use thiserror::Error;

use crate::johnsolve::SolveReport;

/// Errors raised across the crate.
///
/// Variants are grouped loosely into input/precondition problems
/// (bad dimensions, parameters out of range), numerical outcomes that the
/// caller has to act on (unbounded, infeasible, non-convergence) and
/// certification failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} outside the supported range 1..=8")]
    DimensionOutOfRange(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point with norm {norm} lies outside the closed unit ball")]
    OutsideUnitBall { norm: f64 },

    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("function is unbounded")]
    Unbounded,

    #[error("function is not proper (vanishes identically)")]
    Improper,

    #[error("integral diverges along direction {direction:?}")]
    DivergentIntegral { direction: Vec<f64> },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("decomposition infeasible: least-squares residual {residual:e} above tolerance {tolerance:e}")]
    InfeasibleWeights { residual: f64, tolerance: f64 },

    #[error("no admissible rotation hyperplane after {attempts} attempts")]
    NoValidHyperplane { attempts: usize },

    #[error("bump function is not regular (anchor on the unit sphere)")]
    NonRegularBump,

    #[error("no position of the reference function fits below f: {0}")]
    Infeasible(String),

    #[error("solver did not converge within {iterations} outer iterations")]
    NotConverged {
        iterations: usize,
        report: Box<SolveReport>,
    },

    #[error("no contact points found")]
    NoContacts,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
