//! JSON run configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expr::{parse_in, ExprFn, Var};
use crate::grid::GridPolicy;
use crate::thermistor::Hypotheses;
use crate::timescale::TimeScale;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_PANELS: usize = 1024;

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_max_iter() -> usize {
    DEFAULT_MAX_ITER
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn zero_expr() -> ExprFn {
    crate::expr::parse_expr("0").expect("literal parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub problem: Problem,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub out: OutConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// Output paths; relative ones are resolved against the config file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Problem {
    Rl(RlConfig),
    Caputo(CaputoConfig),
    Ts(TsConfig),
    Abel1(Abel1Config),
    Abel2(Abel2Config),
    Op(OpConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Asserted {
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "Lf")]
    pub lf: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<[f64; 2]>,
}

impl Asserted {
    pub fn hypotheses(&self) -> Hypotheses {
        let mut h = Hypotheses::new(self.c1, self.c2, self.lf);
        if let Some(s) = self.sample {
            h.sample = s;
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RlConfig {
    pub alpha: f64,
    pub lambda: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(rename = "N", default = "one")]
    pub weight: f64,
    /// Nonlinearity in `u`.
    pub f: ExprFn,
    /// Source term in `t`.
    #[serde(default = "zero_expr")]
    pub h: ExprFn,
    #[serde(flatten)]
    pub asserted: Asserted,
    /// Constant initial iterate.
    #[serde(default)]
    pub initial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaputoConfig {
    pub alpha: f64,
    pub lambda: f64,
    /// Target horizon reached by continuation.
    #[serde(rename = "T")]
    pub horizon: f64,
    pub u0: f64,
    /// Nonlinearity in `(s, u)`.
    pub f: ExprFn,
    #[serde(flatten)]
    pub asserted: Asserted,
    pub b: f64,
    #[serde(rename = "M", default = "one")]
    pub m: f64,
    #[serde(default = "two")]
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TsConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub timescale: TimeScale,
    /// Nonlinearity in `u`.
    pub f: ExprFn,
    #[serde(flatten)]
    pub asserted: Asserted,
}

/// `f = I^{1-α} g`, solved for `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Abel1Config {
    pub alpha: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Right-hand side in `x`.
    pub f: ExprFn,
}

/// `g(x) + ∫_0^x k(x, s) g(s) (x - s)^{-α} ds = f(x)`, solved for `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Abel2Config {
    pub alpha: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Right-hand side in `x`.
    pub f: ExprFn,
    /// Kernel in `(x, s)`.
    pub k: ExprFn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum OpKind {
    #[serde(rename = "Ialpha")]
    #[value(name = "Ialpha")]
    Integral,
    #[serde(rename = "Dalpha")]
    #[value(name = "Dalpha")]
    Derivative,
    #[serde(rename = "Calpha")]
    #[value(name = "Calpha")]
    Caputo,
}

/// Applies one operator to a function given as an expression in `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpConfig {
    pub apply: OpKind,
    pub alpha: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub g: ExprFn,
}

/// Re-parses `e` with only `vars` allowed, so a misplaced variable is
/// reported against its own field.
pub fn restrict(e: &ExprFn, vars: &[Var]) -> Result<ExprFn> {
    Ok(parse_in(e.source(), vars)?)
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Rl(_) => "rl",
            Problem::Caputo(_) => "caputo",
            Problem::Ts(_) => "ts",
            Problem::Abel1(_) => "abel1",
            Problem::Abel2(_) => "abel2",
            Problem::Op(_) => "op",
        }
    }

    /// Order used for the default grading `γ = max(1, 1/(2α))`.
    fn alpha(&self) -> f64 {
        match self {
            Problem::Rl(c) => c.alpha,
            Problem::Caputo(c) => c.alpha,
            Problem::Ts(c) => c.alpha,
            Problem::Abel1(c) => c.alpha,
            Problem::Abel2(c) => c.alpha,
            Problem::Op(c) => c.alpha,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Grid policy with defaults filled in. Caputo runs default to a
    /// uniform grid per window: their solutions blow up like `t^{2α-2}`
    /// at the origin, and grading would put nodes where `u` is enormous.
    pub fn grid_policy(&self) -> GridPolicy {
        let n = self.grid.n.unwrap_or(DEFAULT_PANELS);
        let gamma = self.grid.gamma.unwrap_or(match self.problem {
            Problem::Caputo(_) => 1.0,
            _ => (1.0 / (2.0 * self.problem.alpha())).max(1.0),
        });
        GridPolicy { n, gamma }
    }

    /// The same configuration with every default written out.
    pub fn normalized(&self) -> RunConfig {
        let policy = self.grid_policy();
        RunConfig {
            grid: GridConfig { n: Some(policy.n), gamma: Some(policy.gamma) },
            ..self.clone()
        }
    }
}
