//! Oracle comparison suites behind `fracsolve verify`.
//!
//! Each check compares one solver output against an independent reference
//! from [`crate::oracle`] or a closed form, and passes when the error is
//! within its tolerance. Grids are kept small enough for debug builds.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::frac::{caputo_derivative, rl_derivative, rl_integral};
use crate::func::{constant1, constant2, func2};
use crate::grid::{make_grid, FracOrder, GridFn, GridPolicy};
use crate::oracle::{brute_rl_integral, discrete_ts_sum, mittag_leffler, power_law_rl_integral};
use crate::thermistor::{gronwall_envelope, rl_threshold, solve_caputo_local, solve_rl, ts_threshold, CaputoSpec, Hypotheses, RlSpec};
use crate::timescale::{delta_integral, ts_frac_integral, TimeScale, TsGrid, TsGridFn};
use crate::volterra::{abel_first_kind_convolution, abel_second_kind, picard_solve, VolterraProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Operators,
    Volterra,
    Thermistor,
    Timescale,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["operators", "volterra", "thermistor", "timescale", "all"];

    pub fn from_name(name: &str) -> Option<Suite> {
        Some(match name {
            "operators" => Suite::Operators,
            "volterra" => Suite::Volterra,
            "thermistor" => Suite::Thermistor,
            "timescale" => Suite::Timescale,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Operators => "operators",
            Suite::Volterra => "volterra",
            Suite::Thermistor => "thermistor",
            Suite::Timescale => "timescale",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Collects checks; a solver error becomes a failing check rather than a panic.
struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Recorder { suite: suite.name(), checks: Vec::new() }
    }

    fn abs(&mut self, name: impl Into<String>, value: Result<f64>, reference: f64, tol: f64) {
        self.push(name.into(), value, reference, tol, false);
    }

    fn rel(&mut self, name: impl Into<String>, value: Result<f64>, reference: f64, tol: f64) {
        self.push(name.into(), value, reference, tol, true);
    }

    fn push(&mut self, name: String, value: Result<f64>, reference: f64, tol: f64, relative: bool) {
        let (value, error) = match value {
            Ok(v) => {
                let scale = if relative { reference.abs().max(f64::MIN_POSITIVE) } else { 1.0 };
                (v, (v - reference).abs() / scale)
            }
            Err(e) => {
                let name = format!("{name} ({e})");
                self.checks.push(Check { suite: self.suite, name, value: f64::NAN, reference, error: f64::NAN, tol, pass: false });
                return;
            }
        };
        let pass = error <= tol;
        self.checks.push(Check { suite: self.suite, name, value, reference, error, tol, pass });
    }
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).expect("fixed order in (0, 1)")
}

fn sampled(n: usize, gamma: f64, f: impl Fn(f64) -> f64) -> Result<GridFn> {
    GridFn::from_fn(make_grid(1.0, GridPolicy::graded(n, gamma))?, f)
}

/// Largest relative error against `exact` over nodes with `t >= from`.
fn max_rel(g: &GridFn, from: f64, exact: impl Fn(f64) -> f64) -> f64 {
    g.nodes()
        .iter()
        .zip(g.values())
        .filter(|(&t, _)| t >= from)
        .map(|(&t, &v)| {
            let e = exact(t);
            (v - e).abs() / e.abs().max(1e-300)
        })
        .fold(0.0, f64::max)
}

fn operators(r: &mut Recorder) {
    for &a in &[0.3, 0.5, 0.7] {
        for &mu in &[0.0, 1.0, 2.0] {
            let v = sampled(512, 2.0, |t| t.powf(mu))
                .and_then(|g| rl_integral(&g, order(a)))
                .map(|i| i.last().1);
            let exact = power_law_rl_integral(mu, order(a), 1.0).map_or(f64::NAN, |o| o.value);
            r.rel(format!("I^{a} t^{mu} at t = 1"), v, exact, 1e-3);
        }
    }
    for &a in &[0.3, 0.5, 0.7] {
        let g = |t: f64| 1.0 + t + t * t;
        let err = sampled(512, 2.0, g)
            .and_then(|s| rl_integral(&s, order(a)))
            .and_then(|i| rl_derivative(&i, order(a)))
            .map(|d| max_rel(&d, 0.0, g));
        r.abs(format!("D^{a} I^{a} g = g, max relative error"), err, 0.0, 1e-3);
    }
    let v = sampled(512, 2.0, f64::sin).and_then(|g| rl_integral(&g, order(0.3))).map(|i| i.last().1);
    let exact = brute_rl_integral(f64::sin, order(0.3), 1.0, 200_000).map_or(f64::NAN, |o| o.value);
    r.rel("I^0.3 sin at t = 1 vs brute quadrature", v, exact, 1e-3);
    let a = 0.4;
    let err = sampled(512, 2.0, |t| t * t)
        .and_then(|g| caputo_derivative(&g, order(a)))
        .map(|d| max_rel(&d, 0.05, |t| 2.0 * t.powf(2.0 - a) / crate::gamma::gamma(3.0 - a)));
    r.abs("C^0.4 t^2, max relative error on [0.05, 1]", err, 0.0, 1e-3);
}

fn volterra(r: &mut Recorder) {
    for &(a, lambda) in &[(0.5, -1.0), (0.5, 0.5), (0.8, -0.3)] {
        let p = VolterraProblem::new(order(a), 1.0, func2(move |_, u| lambda * u), 1.0, GridPolicy::graded(512, 2.0));
        let v = picard_solve(&p, 1e-12, 200).map(|s| s.solution.last().1);
        let exact = mittag_leffler(a, lambda, 80).map_or(f64::NAN, |o| o.value);
        r.rel(format!("u = 1 + {lambda} I^{a} u vs Mittag-Leffler at t = 1"), v, exact, 1e-3);
    }
    let a = 0.4;
    // f = I^{1-α} x, so g = x
    let f = sampled(1024, 2.0, |x| x.powf(2.0 - a) / crate::gamma::gamma(3.0 - a));
    let err = f.and_then(|f| abel_first_kind_convolution(&f, order(a))).map(|g| max_rel(&g, 0.01, |x| x));
    r.abs("first-kind Abel recovers g = x", err, 0.0, 1e-3);
    // k ≡ 1 and g ≡ 1 give f = 1 + x^{1-α}/(1-α)
    let f = sampled(1024, 2.0, |x| 1.0 + x.powf(1.0 - a) / (1.0 - a));
    let err = f
        .and_then(|f| abel_second_kind(&f, &constant2(1.0), order(a), 1e-12, 500))
        .map(|s| max_rel(&s.solution, 0.0, |_| 1.0));
    r.abs("second-kind Abel recovers g = 1", err, 0.0, 1e-3);
}

fn thermistor(r: &mut Recorder) {
    let (alpha, lambda) = (0.25, 0.1);
    let mut spec = RlSpec::new(alpha, lambda, 1.0, constant1(1.0), Hypotheses::new(1.0, 1.0, 0.0));
    spec.grid = GridPolicy::for_thermistor(256, alpha);
    let v = solve_rl(&spec, 1e-12, 50).map(|(s, _)| s.solution.last().1);
    let exact = lambda * power_law_rl_integral(0.0, order(2.0 * alpha), 1.0).map_or(f64::NAN, |o| o.value);
    r.rel("RL thermistor, f = 1, u(1)", v, exact, 1e-4);
    let e = std::f64::consts::E;
    let hyp = Hypotheses::new(1.0, 1.0, 1.0);
    r.rel("RL threshold, N = 1", Ok(rl_threshold(alpha, 1.0, 1.0, &hyp)), 1.0 / (1.0 + 2.0 * e), 1e-9);
    r.rel("RL threshold, N = 2", Ok(rl_threshold(alpha, 1.0, 2.0, &hyp)), 2f64.sqrt() / (1.0 + 2.0 * e * e), 1e-9);
    let g = statrs::function::gamma::gamma(1.5);
    r.rel("time scale threshold, alpha = 1/4, T = 1", Ok(ts_threshold(alpha, 1.0, &hyp)), g / 3.0, 1e-9);

    let (a, ga) = (0.1, order(0.5));
    let w = make_grid(1.0, GridPolicy::uniform(1024)).and_then(|n| GridFn::constant(n, 1.0));
    let env = w.and_then(|w| gronwall_envelope(&w, a, ga)).map(|v| v.last().1);
    let z = a * statrs::function::gamma::gamma(0.5);
    let exact = mittag_leffler(0.5, z, 80).map_or(f64::NAN, |o| o.value);
    r.abs("Gronwall envelope at t = 1", env, exact, 1e-4);

    let mut cap = CaputoSpec::new(alpha, 1.0, 0.5, constant2(1.0), hyp);
    cap.grid = GridPolicy::uniform(64);
    let v = solve_caputo_local(&cap, 1e-12, 20).map(|s| s.solution.last());
    let exact = |t: f64| 0.5 + t.powf(2.0 * alpha - 2.0) / statrs::function::gamma::gamma(2.0 * alpha + 1.0);
    match v {
        Ok((t, u)) => r.rel(format!("Caputo thermistor, f = 1, u({t:.4})"), Ok(u), exact(t), 1e-10),
        Err(e) => r.rel("Caputo thermistor, f = 1", Err(e), f64::NAN, 1e-10),
    }
}

fn timescale(r: &mut Recorder) {
    let a = 0.35;
    let v = TimeScale::interval(0.0, 1.0)
        .and_then(|ts| TsGrid::new(ts, GridPolicy::graded(512, 2.0)))
        .and_then(|g| TsGridFn::from_fn(g, |t| t))
        .and_then(|g| ts_frac_integral(&g, order(a), 0.0, 1.0));
    let exact = power_law_rl_integral(1.0, order(a), 1.0).map_or(f64::NAN, |o| o.value);
    r.rel("time scale [0, 1] reduces to I^0.35 t", v, exact, 1e-4);

    let h = 0.125;
    let lattice = TimeScale::lattice(0.0, h, 8).expect("valid lattice");
    let g = |t: f64| 1.0 + t * t;
    let v = TsGrid::new(lattice.clone(), GridPolicy::uniform(8))
        .and_then(|grid| TsGridFn::from_fn(grid, g))
        .and_then(|f| ts_frac_integral(&f, order(0.5), 0.0, 1.0));
    let exact = discrete_ts_sum(&lattice, g, order(0.5), 1.0).map_or(f64::NAN, |o| o.value);
    r.abs("lattice 0.125 Z vs explicit sum", v, exact, 1e-12);

    let v = TimeScale::new(vec![(0.0, 0.5), (1.0, 1.0)])
        .and_then(|ts| TsGrid::new(ts, GridPolicy::uniform(32)))
        .and_then(|grid| TsGridFn::from_fn(grid, |t| t))
        .and_then(|f| delta_integral(&f, 0.0, 1.0));
    r.abs("delta integral of t over [0, 1/2] and {1}", v, 0.375, 1e-12);
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    if suite == Suite::All {
        return [Suite::Operators, Suite::Volterra, Suite::Thermistor, Suite::Timescale]
            .into_iter()
            .flat_map(run_suite)
            .collect();
    }
    let mut r = Recorder::new(suite);
    match suite {
        Suite::Operators => operators(&mut r),
        Suite::Volterra => volterra(&mut r),
        Suite::Thermistor => thermistor(&mut r),
        Suite::Timescale => timescale(&mut r),
        Suite::All => unreachable!(),
    }
    r.checks
}

pub fn table(checks: &[Check]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<11} {:<58} {:>12} {:>9} {:>6}", "suite", "check", "error", "tol", "");
    for c in checks {
        let _ = writeln!(
            out,
            "{:<11} {:<58} {:>12.3e} {:>9.1e} {:>6}",
            c.suite,
            c.name,
            c.error,
            c.tol,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(out, "{} checks, {} failed", checks.len(), failed);
    out
}
