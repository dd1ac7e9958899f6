use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::config::{restrict, OpKind, Problem, RunConfig};
use super::{exit_code, EXIT_DIVERGED, EXIT_HYPOTHESIS, EXIT_OK};
use crate::error::{Error, Result};
use crate::expr::Var;
use crate::frac::{caputo_derivative, rl_derivative, rl_integral};
use crate::grid::{make_grid, FracOrder, GridFn, GridPolicy};
use crate::thermistor::{
    caputo_local_radius, continuation_window, continue_caputo, rl_threshold, scan_weight,
    solve_caputo_local, solve_rl_from, solve_ts, ts_threshold, BoundReport, CaputoSpec, RlSpec,
    TsSpec,
};
use crate::volterra::{abel_first_kind_convolution, abel_second_kind, SolveReport};

/// Continuation windows a single Caputo run may take.
const MAX_WINDOWS: usize = 10_000;

/// The JSON report written next to the solution.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub kind: &'static str,
    pub converged: bool,
    pub iterations: usize,
    pub contraction_factor: f64,
    pub residual: f64,
    pub threshold: Option<f64>,
    pub bound: Option<f64>,
    pub bound_satisfied: Option<bool>,
    pub realized_norm: Option<f64>,
    pub wall_time_ms: u64,
    pub differences: Vec<f64>,
    pub warnings: Vec<String>,
    pub hypothesis_violations: Vec<String>,
    pub error: Option<String>,
}

pub struct Outcome {
    pub solution: Option<GridFn>,
    pub report: RunReport,
    pub exit_code: i32,
}

struct Solved {
    report: SolveReport,
    bounds: Option<BoundReport>,
}

impl Solved {
    fn plain(report: SolveReport) -> Self {
        Solved { report, bounds: None }
    }

    fn direct(solution: GridFn) -> Self {
        Solved::plain(SolveReport {
            solution,
            iterations: 0,
            differences: Vec::new(),
            contraction_factor: 0.0,
            residual: 0.0,
            converged: true,
            warnings: Vec::new(),
            hypothesis_violations: Vec::new(),
        })
    }
}

/// Runs a configuration. Never fails: errors are folded into the report
/// and the exit code.
pub fn execute(config: &RunConfig) -> Outcome {
    let start = Instant::now();
    let result = solve(config);
    let wall_time_ms = start.elapsed().as_millis() as u64;
    let kind = config.problem.name();
    match result {
        Ok(Solved { report: r, bounds }) => {
            let exit_code = if !r.converged {
                EXIT_DIVERGED
            } else if !r.hypothesis_violations.is_empty() {
                EXIT_HYPOTHESIS
            } else {
                EXIT_OK
            };
            let report = RunReport {
                kind,
                converged: r.converged,
                iterations: r.iterations,
                contraction_factor: r.contraction_factor,
                residual: r.residual,
                threshold: bounds.map(|b| b.threshold),
                bound: bounds.and_then(|b| b.bound),
                bound_satisfied: bounds.and_then(|b| b.satisfied),
                realized_norm: bounds.map(|b| b.realized),
                wall_time_ms,
                differences: r.differences,
                warnings: r.warnings,
                hypothesis_violations: r.hypothesis_violations,
                error: (!r.converged).then(|| format!("no convergence within {} iterations", config.max_iter)),
            };
            Outcome { solution: Some(r.solution), report, exit_code }
        }
        Err(e) => {
            let code = exit_code(&e);
            let message = e.to_string();
            let (solution, trace) = match e {
                Error::Divergence(r) => (Some(r.solution.clone()), Some(*r)),
                _ => (None, None),
            };
            let report = RunReport {
                kind,
                converged: false,
                iterations: trace.as_ref().map_or(0, |r| r.iterations),
                contraction_factor: trace.as_ref().map_or(f64::NAN, |r| r.contraction_factor),
                residual: trace.as_ref().map_or(f64::NAN, |r| r.residual),
                threshold: None,
                bound: None,
                bound_satisfied: None,
                realized_norm: None,
                wall_time_ms,
                differences: trace.as_ref().map_or_else(Vec::new, |r| r.differences.clone()),
                warnings: trace.map_or_else(Vec::new, |r| r.warnings),
                hypothesis_violations: Vec::new(),
                error: Some(message),
            };
            Outcome { solution, report, exit_code: code }
        }
    }
}

fn rl_spec(c: &super::config::RlConfig, policy: GridPolicy) -> Result<RlSpec> {
    let mut spec = RlSpec::new(c.alpha, c.lambda, c.horizon, restrict(&c.f, &[Var::U])?.func1(Var::U), c.asserted.hypotheses());
    spec.h = restrict(&c.h, &[Var::T])?.func1(Var::T);
    spec.weight = c.weight;
    spec.grid = policy;
    Ok(spec)
}

fn caputo_spec(c: &super::config::CaputoConfig, policy: GridPolicy) -> Result<CaputoSpec> {
    let f = restrict(&c.f, &[Var::S, Var::U])?.func2(Var::S, Var::U);
    let mut spec = CaputoSpec::new(c.alpha, c.lambda, c.u0, f, c.asserted.hypotheses());
    spec.horizon = c.horizon;
    spec.ball = c.b;
    spec.m = c.m;
    spec.omega = c.omega;
    spec.grid = policy;
    Ok(spec)
}

fn ts_spec(c: &super::config::TsConfig, policy: GridPolicy) -> Result<TsSpec> {
    let f = restrict(&c.f, &[Var::U])?.func1(Var::U);
    let mut spec = TsSpec::new(c.alpha, c.lambda, c.timescale.clone(), f, c.asserted.hypotheses());
    spec.grid = policy;
    Ok(spec)
}

fn sample(horizon: f64, policy: GridPolicy, e: &crate::expr::ExprFn, var: Var) -> Result<GridFn> {
    let f = restrict(e, &[var])?.func1(var);
    GridFn::from_fn(make_grid(horizon, policy)?, |x| f(x))
}

fn solve(config: &RunConfig) -> Result<Solved> {
    if !(config.tol.is_finite() && config.tol > 0.0) {
        return Err(Error::Precondition(format!("tol = {} must be positive", config.tol)));
    }
    let policy = config.grid_policy();
    let (tol, max_iter) = (config.tol, config.max_iter);
    match &config.problem {
        Problem::Rl(c) => {
            let spec = rl_spec(c, policy)?;
            let (report, bounds) = solve_rl_from(&spec, c.initial, tol, max_iter)?;
            Ok(Solved { report, bounds: Some(bounds) })
        }
        Problem::Caputo(c) => {
            let spec = caputo_spec(c, policy)?;
            let mut report = solve_caputo_local(&spec, tol, max_iter)?;
            let mut windows = 0;
            while report.converged && report.solution.last().0 < spec.horizon {
                windows += 1;
                if windows > MAX_WINDOWS {
                    return Err(Error::Precondition(format!(
                        "reaching T = {} needs more than {MAX_WINDOWS} continuation windows",
                        spec.horizon
                    )));
                }
                report = continue_caputo(&report, &spec, tol, max_iter)?;
            }
            Ok(Solved::plain(report))
        }
        Problem::Ts(c) => {
            let spec = ts_spec(c, policy)?;
            let (report, bounds) = solve_ts(&spec, tol, max_iter)?;
            Ok(Solved { report, bounds: Some(bounds) })
        }
        Problem::Abel1(c) => {
            let order = FracOrder::new(c.alpha)?;
            let f = sample(c.horizon, policy, &c.f, Var::X)?;
            Ok(Solved::direct(abel_first_kind_convolution(&f, order)?))
        }
        Problem::Abel2(c) => {
            let order = FracOrder::new(c.alpha)?;
            let f = sample(c.horizon, policy, &c.f, Var::X)?;
            let k = restrict(&c.k, &[Var::X, Var::S])?.func2(Var::X, Var::S);
            Ok(Solved::plain(abel_second_kind(&f, &k, order, tol, max_iter)?))
        }
        Problem::Op(c) => {
            let g = sample(c.horizon, policy, &c.g, Var::T)?;
            Ok(Solved::direct(apply_operator(c.apply, c.alpha, &g)?))
        }
    }
}

pub(crate) fn apply_operator(kind: OpKind, alpha: f64, g: &GridFn) -> Result<GridFn> {
    let order = FracOrder::new(alpha)?;
    match kind {
        OpKind::Integral => rl_integral(g, order),
        OpKind::Derivative => rl_derivative(g, order),
        OpKind::Caputo => caputo_derivative(g, order),
    }
}

/// Closed-form numbers for a config, without solving.
pub(crate) fn thresholds(config: &RunConfig) -> Result<serde_json::Value> {
    let policy = config.grid_policy();
    match &config.problem {
        Problem::Rl(c) => {
            let spec = rl_spec(c, policy)?;
            let (best_n, best) = scan_weight(&spec)?;
            Ok(json!({
                "kind": "rl",
                "threshold": rl_threshold(c.alpha, c.horizon, c.weight, &spec.hyp),
                "bound": crate::thermistor::bound_rl(&spec)?,
                "N": c.weight,
                "best_N": best_n,
                "best_threshold": best,
            }))
        }
        Problem::Ts(c) => {
            let spec = ts_spec(c, policy)?;
            spec.validate()?;
            Ok(json!({ "kind": "ts", "threshold": ts_threshold(c.alpha, spec.horizon(), &spec.hyp) }))
        }
        Problem::Caputo(c) => {
            let spec = caputo_spec(c, policy)?;
            Ok(json!({
                "kind": "caputo",
                "local_radius": caputo_local_radius(&spec)?,
                "continuation_window": continuation_window(&spec)?,
            }))
        }
        other => Err(Error::Precondition(format!("no thresholds for problem kind `{}`", other.name()))),
    }
}

/// Writes `t,u` with 17 significant digits.
pub fn write_series(path: &Path, nodes: &[f64], values: &[f64]) -> Result<()> {
    let io = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["t", "u"]).map_err(io)?;
    for (t, u) in nodes.iter().zip(values) {
        w.write_record([format!("{t:.16e}"), format!("{u:.16e}")]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Reads a two-column series; a non-numeric first row is taken as a header.
pub fn read_series(path: &Path) -> Result<GridFn> {
    let io = |e: csv::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(io)?;
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(io)?;
        if rec.len() < 2 {
            return Err(Error::Io(format!("{}: line {} needs two columns", path.display(), i + 1)));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(t), Ok(v)) => {
                nodes.push(t);
                values.push(v);
            }
            _ if i == 0 => continue,
            _ => return Err(Error::Io(format!("{}: line {} is not numeric", path.display(), i + 1))),
        }
    }
    GridFn::new(nodes, values)
}
