//! JSON problem configurations for the command line. Floats are written
//! in shortest round-trip form, so `parse(emit(c)) == c` holds exactly.

use serde::{Deserialize, Serialize};

use crate::decomp::{generate_decomposition, DecompositionRecord};
use crate::error::{Error, Result};
use crate::johnsolve::SolverOptions;
use crate::lcfunc::LogConcaveFunction;
use crate::linalg::Vector;
use crate::position::PositionRecord;
use crate::verify::{CheckOptions, LownerKind};

/// Tagged description of a log-concave function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum FunctionSpec {
    Height { dim: usize },
    HeightPower { dim: usize, s: f64 },
    BallIndicator { radius: f64, center: Vec<f64> },
    Bump { anchors: Vec<Vec<f64>> },
    /// Bump of the generated decomposition with this seed.
    CorpusBump { dim: usize, seed: u64 },
    Gaussian { dim: usize },
    ExpNorm { dim: usize, p: f64 },
    PolarHeightPower { dim: usize, s: f64 },
    HalfRestriction { inner: Box<FunctionSpec>, normal: Vec<f64> },
    Positioned { inner: Box<FunctionSpec>, position: PositionRecord },
}

impl FunctionSpec {
    pub fn build(&self) -> Result<LogConcaveFunction> {
        match self {
            FunctionSpec::Height { dim } => LogConcaveFunction::height(*dim),
            FunctionSpec::HeightPower { dim, s } => LogConcaveFunction::height_power(*dim, *s),
            FunctionSpec::BallIndicator { radius, center } => {
                LogConcaveFunction::ball_indicator(*radius, Vector::from_column_slice(center))
            }
            FunctionSpec::Bump { anchors } => {
                let pts: Vec<Vector> = anchors.iter().map(|a| Vector::from_column_slice(a)).collect();
                LogConcaveFunction::bump(&pts)
            }
            FunctionSpec::CorpusBump { dim, seed } => LogConcaveFunction::bump(generate_decomposition(*dim, *seed)?.points()),
            FunctionSpec::Gaussian { dim } => LogConcaveFunction::gaussian(*dim),
            FunctionSpec::ExpNorm { dim, p } => LogConcaveFunction::exp_norm(*dim, *p),
            FunctionSpec::PolarHeightPower { dim, s } => LogConcaveFunction::polar_height_power(*dim, *s),
            FunctionSpec::HalfRestriction { inner, normal } => {
                LogConcaveFunction::half_restriction(inner.build()?, Vector::from_column_slice(normal))
            }
            FunctionSpec::Positioned { inner, position } => {
                LogConcaveFunction::positioned(inner.build()?, position.to_position()?)
            }
        }
    }

    fn numbers(&self, out: &mut Vec<f64>) {
        match self {
            FunctionSpec::HeightPower { s, .. } | FunctionSpec::PolarHeightPower { s, .. } => out.push(*s),
            FunctionSpec::ExpNorm { p, .. } => out.push(*p),
            FunctionSpec::BallIndicator { radius, center } => {
                out.push(*radius);
                out.extend(center);
            }
            FunctionSpec::Bump { anchors } => anchors.iter().for_each(|a| out.extend(a)),
            FunctionSpec::HalfRestriction { inner, normal } => {
                inner.numbers(out);
                out.extend(normal);
            }
            FunctionSpec::Positioned { inner, position } => {
                inner.numbers(out);
                out.push(position.alpha);
                position.matrix.iter().for_each(|r| out.extend(r));
                out.extend(&position.shift);
            }
            _ => {}
        }
    }
}

/// The reference function `w`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ReferenceSpec {
    #[default]
    Height,
    HeightPower { s: f64 },
    BallIndicator { radius: f64, center: Option<Vec<f64>> },
}

impl ReferenceSpec {
    pub fn build(&self, dim: usize) -> Result<LogConcaveFunction> {
        match self {
            ReferenceSpec::Height => LogConcaveFunction::height(dim),
            ReferenceSpec::HeightPower { s } => LogConcaveFunction::height_power(dim, *s),
            ReferenceSpec::BallIndicator { radius, center } => {
                let c = center.as_ref().map(|c| Vector::from_column_slice(c)).unwrap_or_else(|| Vector::zeros(dim));
                LogConcaveFunction::ball_indicator(*radius, c)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemConfig {
    pub dimension: Option<usize>,
    pub seed: Option<u64>,
    pub f: Option<FunctionSpec>,
    pub w: ReferenceSpec,
    pub solver: SolverOptions,
    pub check: CheckOptions,
    pub decomposition: Option<DecompositionRecord>,
    /// Fixed height for `fixed-height`.
    pub xi: Option<f64>,
    /// Heights for `height-curve`.
    pub alphas: Option<Vec<f64>>,
    /// Evaluation points for `polar`.
    pub points: Option<Vec<Vec<f64>>>,
    pub tolerance: Option<f64>,
    pub contact_tol: Option<f64>,
    pub lowner: Option<LownerKind>,
    /// Regularization count for `gen-decomp`.
    pub regularize: Option<u64>,
    /// Criteria for `corpus`; all when empty.
    pub criteria: Vec<u8>,
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: ProblemConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Every numeric parameter finite; the solver options in range.
    pub fn validate(&self) -> Result<()> {
        let mut nums = vec![];
        if let Some(f) = &self.f {
            f.numbers(&mut nums);
        }
        match &self.w {
            ReferenceSpec::HeightPower { s } => nums.push(*s),
            ReferenceSpec::BallIndicator { radius, center } => {
                nums.push(*radius);
                nums.extend(center.iter().flatten());
            }
            ReferenceSpec::Height => {}
        }
        if let Some(dec) = &self.decomposition {
            dec.entries.iter().for_each(|e| {
                nums.extend(&e.point);
                nums.push(e.weight);
            });
        }
        nums.extend(self.xi);
        nums.extend(self.alphas.iter().flatten());
        nums.extend(self.points.iter().flatten().flatten());
        nums.extend(self.tolerance);
        nums.extend(self.contact_tol);
        match self.lowner {
            Some(LownerKind::ExpNorm { p }) => nums.push(p),
            Some(LownerKind::PolarHeightPower { s }) => nums.push(s),
            None => {}
        }
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("numeric parameters must be finite".into()));
        }
        self.solver.validate().map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_nested() {
        let c = ProblemConfig {
            dimension: Some(2),
            seed: Some(7),
            f: Some(FunctionSpec::Positioned {
                inner: Box::new(FunctionSpec::Bump {
                    anchors: vec![vec![0.1, 0.2], vec![-0.3, 1.0 / 3.0]],
                }),
                position: PositionRecord {
                    alpha: 0.1 + 0.2,
                    matrix: vec![vec![1.0, 0.0], vec![0.0, 2.0]],
                    shift: vec![1e-300, -0.0],
                },
            }),
            alphas: Some(vec![0.05, std::f64::consts::PI]),
            ..Default::default()
        };
        let back = ProblemConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(back.f.unwrap().build().is_ok());
    }

    #[test]
    fn rejects_unknown_and_bad() {
        assert!(matches!(ProblemConfig::from_json("{\"bogus\": 1}"), Err(Error::Config(_))));
        assert!(matches!(ProblemConfig::from_json("{\"xi\": 1e999}"), Err(Error::Config(_))));
        let minimal = ProblemConfig::from_json("{\"f\": {\"variant\": \"height\", \"dim\": 2}}").unwrap();
        assert_eq!(minimal.w, ReferenceSpec::Height);
    }
}
