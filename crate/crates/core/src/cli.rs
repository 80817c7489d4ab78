//! The `fjohn` command line and its JSON run reports.
//!
//! Exit codes: `0` all certificates pass, `1` a certificate failed,
//! `2` bad arguments or config, `3` a precondition failed.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::acceptance;
use crate::bump::{bump_from_decomposition, norm_gap_probe};
use crate::config::{FunctionSpec, ProblemConfig};
use crate::decomp::{generate_decomposition, hull_ball_margin, regularize_decomposition, verify_decomposition, DecompositionRecord};
use crate::error::{Error, Result};
use crate::johnsolve::{extract_and_certify, height_curve, solve_fixed_height, solve_john, to_john_coordinates, SolveReport};
use crate::lcfunc::LogConcaveFunction;
use crate::linalg::Vector;
use crate::polar::polar_eval;
use crate::position::AffinePosition;
use crate::verify::{check_domination, john_inclusion_check, lowner_counterexample, sandwich_construct, CheckOptions, LownerKind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CERTIFICATE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fjohn", version, about = "John positions and inclusion certificates for log-concave functions")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON problem configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for report.json and CSV artifacts; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Dimension; also selects a corpus bump when no function is configured.
    #[arg(long, global = true)]
    pub d: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LownerArg {
    Expnorm,
    PolarHeightPower,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a decomposition of the identity.
    GenDecomp {
        /// Add this many points by splitting weights.
        #[arg(long)]
        regularize: Option<u64>,
    },
    /// Check the identities and the hull margin of a decomposition file.
    VerifyDecomp {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Build the bump of a decomposition and report its norm gap.
    Bump {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Solve the John problem for `f` against `w`.
    SolveJohn {
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Solve with the height pinned at `xi`.
    FixedHeight {
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Sample `Phi(t) = det(A)^{1/d}` over heights.
    HeightCurve {
        /// Comma-separated heights.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        /// Log-spaced samples between --alpha-min and --alpha-max.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha_min: f64,
        #[arg(long)]
        alpha_max: Option<f64>,
    },
    /// Evaluate the polar of `f` at points.
    Polar {
        /// One comma-separated point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Option<Vec<f64>>,
    },
    /// Check both inclusions for `f` in John position.
    JohnCheck,
    /// Build and certify the sandwich for `f`.
    Sandwich,
    /// Run the Löwner counterexample suite.
    LownerCheck {
        #[arg(long, value_enum)]
        kind: Option<LownerArg>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
    },
    /// Run the acceptance criteria and print one verdict line each.
    Corpus {
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GenDecomp { .. } => "gen-decomp",
            Command::VerifyDecomp { .. } => "verify-decomp",
            Command::Bump { .. } => "bump",
            Command::SolveJohn { .. } => "solve-john",
            Command::FixedHeight { .. } => "fixed-height",
            Command::HeightCurve { .. } => "height-curve",
            Command::Polar { .. } => "polar",
            Command::JohnCheck => "john-check",
            Command::Sandwich => "sandwich",
            Command::LownerCheck { .. } => "lowner-check",
            Command::Corpus { .. } => "corpus",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub config: ProblemConfig,
    pub results: Value,
    pub passed: bool,
    /// SHA-256 of command, config, results and verdict.
    pub determinism_hash: String,
    pub wall_clock_seconds: f64,
}

impl RunReport {
    fn new(command: &str, config: ProblemConfig, results: Value, passed: bool, seconds: f64) -> Self {
        let body = json!({"command": command, "config": &config, "results": &results, "passed": passed});
        let hash = hex::encode(Sha256::digest(body.to_string().as_bytes()));
        RunReport {
            command: command.to_string(),
            config,
            results,
            passed,
            determinism_hash: hash,
            wall_clock_seconds: seconds,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A finished run: the report plus CSV artifacts keyed by file name.
#[derive(Debug, Clone)]
pub struct Run {
    pub report: RunReport,
    pub artifacts: Vec<(String, String)>,
    /// Lines for the terminal beyond the report.
    pub lines: Vec<String>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("record serializes")
}

fn require_seed(cfg: &ProblemConfig, command: &str) -> Result<u64> {
    cfg.seed
        .ok_or_else(|| Error::Config(format!("{command} is stochastic and needs a seed (--seed or config)")))
}

fn dimension(cfg: &ProblemConfig) -> Result<usize> {
    cfg.dimension.ok_or_else(|| Error::Config("dimension required (--d or config)".into()))
}

/// The configured `f`, or the corpus bump for `--d` and the seed.
fn function_spec(cfg: &mut ProblemConfig) -> Result<FunctionSpec> {
    if cfg.f.is_none() {
        let dim = dimension(cfg)?;
        cfg.f = Some(FunctionSpec::CorpusBump {
            dim,
            seed: cfg.seed.unwrap_or(0),
        });
    }
    Ok(cfg.f.clone().expect("set above"))
}

fn read_decomposition(cfg: &mut ProblemConfig, input: &Option<PathBuf>) -> Result<DecompositionRecord> {
    if let Some(path) = input {
        let text = std::fs::read_to_string(path)?;
        let rec: DecompositionRecord = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.decomposition = Some(rec);
    }
    if cfg.decomposition.is_none() {
        let d = dimension(cfg)?;
        let seed = require_seed(cfg, "generating a decomposition")?;
        cfg.decomposition = Some(generate_decomposition(d, seed)?.record());
    }
    Ok(cfg.decomposition.clone().expect("set above"))
}

/// Fresh-seed check that the positioned reference stays below `f`.
fn feasibility_check(f: &LogConcaveFunction, w: &LogConcaveFunction, rep: &SolveReport, cfg: &ProblemConfig) -> Result<Value> {
    let g = LogConcaveFunction::positioned(w.clone(), rep.position.clone())?;
    let (c, m) = g
        .support_ellipsoid()
        .ok_or_else(|| Error::Precondition("reference support must be bounded".into()))?;
    let reach = c.norm() + m.norm();
    let opts = CheckOptions {
        seed: cfg.check.seed ^ 0x5eed,
        ..cfg.check.clone()
    };
    let cert = check_domination(&g, f, reach.max(1e-9), &opts)?;
    let tol = 2.0 * cfg.solver.constraint_tol;
    Ok(json!({"max_log_violation": cert.max_log_violation, "witness": cert.witness, "points_checked": cert.points_checked, "tolerance": tol, "passed": cert.max_log_violation <= tol}))
}

/// Certifies contacts and weights after moving `f` to John coordinates.
fn contact_certificate(f: &LogConcaveFunction, rep: &SolveReport, contact_tol: f64) -> Result<(Value, bool)> {
    let fj = to_john_coordinates(f, rep)?;
    let mut at_identity = rep.clone();
    at_identity.position = AffinePosition::identity(f.dim());
    match extract_and_certify(&fj, &at_identity, contact_tol) {
        Ok(c) => {
            let ok = c.recovered_weights.is_some();
            Ok((
                json!({"contacts": c.contacts, "weights": c.recovered_weights, "nnls_residual": c.nnls_residual, "certified": ok}),
                ok,
            ))
        }
        Err(Error::NoContacts) => Ok((json!({"contacts": [], "certified": false}), false)),
        Err(e) => Err(e),
    }
}

fn execute(command: &Command, mut cfg: ProblemConfig) -> Result<Run> {
    let name = command.name();
    let start = Instant::now();
    let mut artifacts = vec![];
    let mut lines = vec![];
    let (results, passed) = match command {
        Command::GenDecomp { regularize } => {
            let d = dimension(&cfg)?;
            let seed = require_seed(&cfg, name)?;
            if regularize.is_some() {
                cfg.regularize = *regularize;
            }
            let mut dec = generate_decomposition(d, seed)?;
            if let Some(n) = cfg.regularize {
                dec = regularize_decomposition(&dec, n, seed)?;
            }
            let res = verify_decomposition(&dec, 1e-10);
            let rec = dec.record();
            artifacts.push(("decomposition.json".to_string(), serde_json::to_string_pretty(&rec).expect("serializes")));
            (json!({"decomposition": rec, "residuals": res}), res.passed)
        }
        Command::VerifyDecomp { input, tol } => {
            if tol.is_some() {
                cfg.tolerance = *tol;
            }
            let dec = read_decomposition(&mut cfg, input)?.to_decomposition()?;
            let res = verify_decomposition(&dec, cfg.tolerance.unwrap_or(crate::decomp::DEFAULT_TOL));
            let margin = hull_ball_margin(&dec)?;
            let ok = res.passed && margin.margin >= -1e-9;
            (json!({"residuals": res, "hull_margin": margin}), ok)
        }
        Command::Bump { input } => {
            let dec = read_decomposition(&mut cfg, input)?.to_decomposition()?;
            let bf = bump_from_decomposition(&dec)?;
            let gap = norm_gap_probe(&bf)?;
            let ok = bf.grid_violation() <= 1e-9 && gap.within_exponential_bound && gap.within_polar_bound;
            (
                json!({"regular": bf.is_regular(), "grid_violation": bf.grid_violation(), "grid_points": bf.grid_points(), "norm_gap": gap}),
                ok,
            )
        }
        Command::SolveJohn { restarts } | Command::FixedHeight { restarts, .. } => {
            cfg.solver.seed = require_seed(&cfg, name)?;
            if let Some(r) = restarts {
                cfg.solver.restarts = *r;
            }
            let f = function_spec(&mut cfg)?.build()?;
            let w = cfg.w.build(f.dim())?;
            let rep = if let Command::FixedHeight { xi, .. } = command {
                if xi.is_some() {
                    cfg.xi = *xi;
                }
                let xi = cfg.xi.ok_or_else(|| Error::Config("fixed-height needs --xi".into()))?;
                solve_fixed_height(&f, &w, xi, &cfg.solver)?
            } else {
                solve_john(&f, &w, &cfg.solver)?
            };
            let feas = feasibility_check(&f, &w, &rep, &cfg)?;
            let mut ok = rep.feasible && feas["passed"] == json!(true);
            let mut out = json!({"solve": rep, "feasibility": feas});
            if matches!(command, Command::SolveJohn { .. }) && matches!(w, LogConcaveFunction::Height { .. }) {
                let (cert, certified) = contact_certificate(&f, &rep, cfg.contact_tol.unwrap_or(1e-6))?;
                ok &= certified;
                out["contact_certificate"] = cert;
            }
            (out, ok)
        }
        Command::HeightCurve {
            alphas,
            samples,
            alpha_min,
            alpha_max,
        } => {
            cfg.solver.seed = require_seed(&cfg, name)?;
            let f = function_spec(&mut cfg)?.build()?;
            let w = cfg.w.build(f.dim())?;
            if alphas.is_some() {
                cfg.alphas = alphas.clone();
            }
            if cfg.alphas.is_none() {
                let hi = match alpha_max {
                    Some(v) => *v,
                    None => f.sup_norm()? * 0.99,
                };
                let n = (*samples).max(2);
                let (lo, hi) = (alpha_min.ln(), hi.ln());
                cfg.alphas = Some((0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()).collect());
            }
            let curve = height_curve(&f, &w, cfg.alphas.as_ref().expect("set above"), &cfg.solver)?;
            let mut csv = vec![];
            curve.write_csv(&mut csv)?;
            artifacts.push(("curve.csv".to_string(), String::from_utf8(csv).expect("csv is utf-8")));
            let ok = curve.records.iter().all(|r| r.feasible) && curve.max_concavity_defect <= 1e-4;
            (to_value(&curve), ok)
        }
        Command::Polar { p } => {
            let f = function_spec(&mut cfg)?.build()?;
            if let Some(p) = p {
                cfg.points = Some(vec![p.clone()]);
            }
            let pts = cfg.points.clone().unwrap_or_else(|| vec![vec![0.0; f.dim()]]);
            let mut vals = vec![];
            for q in &pts {
                let v = polar_eval(&f, &Vector::from_column_slice(q))?;
                lines.push(format!("f°({q:?}) = {}", v.value));
                vals.push(json!({"p": q, "value": v.value, "log_support": v.log_support, "clamped": v.clamped}));
            }
            (json!({"values": vals}), true)
        }
        Command::JohnCheck => {
            cfg.check.seed = cfg.seed.unwrap_or(cfg.check.seed);
            let f = function_spec(&mut cfg)?.build()?;
            let rec = john_inclusion_check(&f, &cfg.check)?;
            lines.push(format!(
                "min polar on B/(d+1) = {} (floor e^-{} = {})",
                rec.polar_floor.min_value,
                f.dim() + 1,
                rec.polar_floor.bound
            ));
            let ok = rec.passed;
            (to_value(&rec), ok)
        }
        Command::Sandwich => {
            cfg.check.seed = cfg.seed.unwrap_or(cfg.check.seed);
            let f = function_spec(&mut cfg)?.build()?;
            let rec = sandwich_construct(&f, &cfg.check)?;
            lines.push(format!("left floor {}, right envelope {}", rec.left_floor, rec.right_envelope));
            let ok = rec.passed;
            (to_value(&rec), ok)
        }
        Command::LownerCheck { kind, p, s } => {
            cfg.check.seed = cfg.seed.unwrap_or(cfg.check.seed);
            let d = cfg.dimension.unwrap_or(1);
            cfg.dimension = Some(d);
            match kind {
                Some(LownerArg::Expnorm) => cfg.lowner = Some(LownerKind::ExpNorm { p: p.unwrap_or(2.0) }),
                Some(LownerArg::PolarHeightPower) => cfg.lowner = Some(LownerKind::PolarHeightPower { s: s.unwrap_or(1.0) }),
                None => {}
            }
            let k = cfg.lowner.unwrap_or(LownerKind::ExpNorm { p: 2.0 });
            cfg.lowner = Some(k);
            let rec = lowner_counterexample(k, d, &cfg.check)?;
            lines.push(format!("(L+)° along -e1 at t = {:?}: {:?}", rec.probe_t, rec.probe_values));
            let ok = rec.passed;
            (to_value(&rec), ok)
        }
        Command::Corpus { only } => {
            if let Some(o) = only {
                cfg.criteria = o.clone();
            }
            let ids = if cfg.criteria.is_empty() {
                acceptance::CRITERIA.to_vec()
            } else {
                cfg.criteria.clone()
            };
            let mut rows = vec![];
            let mut ok = true;
            for id in ids {
                let o = acceptance::run_criterion(id);
                eprintln!("{}", o.line());
                lines.push(o.line());
                ok &= o.passed;
                rows.push(json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail}));
            }
            (json!({"criteria": rows}), ok)
        }
    };
    cfg.validate()?;
    Ok(Run {
        report: RunReport::new(name, cfg, results, passed, start.elapsed().as_secs_f64()),
        artifacts,
        lines,
    })
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Io(_) => EXIT_PARSE,
        Error::NotConverged { .. } | Error::Infeasible(_) | Error::NoContacts | Error::InfeasibleWeights { .. } => EXIT_CERTIFICATE,
        _ => EXIT_PRECONDITION,
    }
}

/// Loads the config and overlays the common flags.
pub fn merged_config(common: &Common) -> Result<ProblemConfig> {
    let mut cfg = match &common.config {
        Some(p) => ProblemConfig::load(p)?,
        None => ProblemConfig::default(),
    };
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    if common.d.is_some() {
        cfg.dimension = common.d;
    }
    Ok(cfg)
}

/// Runs one command line and returns its exit status; bad input never panics.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
        }
    };
    let run = merged_config(&cli.common).and_then(|cfg| execute(&cli.command, cfg));
    let run = match run {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fjohn {}: {e}", cli.command.name());
            return exit_code(&e);
        }
    };
    if let Err(e) = emit(&run, cli.common.out.as_deref()) {
        eprintln!("fjohn: {e}");
        return EXIT_PARSE;
    }
    if run.report.passed {
        EXIT_PASS
    } else {
        EXIT_CERTIFICATE
    }
}

/// Runs a parsed command against a config without touching the disk.
pub fn run(command: &Command, cfg: ProblemConfig) -> Result<Run> {
    execute(command, cfg)
}

fn emit(run: &Run, out: Option<&Path>) -> Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.json"), run.report.to_json())?;
            for (name, body) in &run.artifacts {
                std::fs::write(dir.join(name), body)?;
            }
        }
        None => println!("{}", run.report.to_json()),
    }
    for l in &run.lines {
        if !matches!(run.report.command.as_str(), "corpus") {
            eprintln!("{l}");
        }
    }
    eprintln!("{}", if run.report.passed { "PASS" } else { "FAIL" });
    Ok(())
}
