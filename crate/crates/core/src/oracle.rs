//! Reference values computed along code paths independent of the solvers:
//! closed-form power-law integrals, truncated Mittag-Leffler series,
//! brute-force midpoint quadrature and explicit sums on discrete time scales.
//!
//! Gamma values here come from `statrs`, not from the crate's own Lanczos
//! routine, except in [`discrete_ts_sum`], which is meant to reproduce the
//! library's finite sums to the last bit.

use serde::Serialize;
use statrs::function::gamma::{gamma as sgamma, ln_gamma};

use crate::error::{Error, Result};
use crate::grid::FracOrder;
use crate::timescale::TimeScale;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    PowerLaw,
    MlSeries,
    BruteQuadrature,
    DiscreteSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    /// Estimated absolute error, always finite and nonnegative.
    pub error: f64,
    pub method: OracleMethod,
}

impl OracleResult {
    fn exact(value: f64, method: OracleMethod) -> Self {
        OracleResult { value, error: 0.0, method }
    }
}

/// `I^α t^μ = Γ(μ+1)/Γ(μ+α+1) t^{μ+α}`.
pub fn power_law_rl_integral(mu: f64, alpha: FracOrder, t: f64) -> Result<OracleResult> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::domain(format!("exponent μ = {mu} must be >= 0")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    let a = alpha.value();
    let value = sgamma(mu + 1.0) / sgamma(mu + a + 1.0) * t.powf(mu + a);
    Ok(OracleResult::exact(value, OracleMethod::PowerLaw))
}

/// `E_α(z) ≈ Σ_{k<terms} z^k/Γ(αk+1)`; the error estimate is the first
/// omitted term.
pub fn mittag_leffler(alpha: f64, z: f64, terms: usize) -> Result<OracleResult> {
    if terms < 10 {
        return Err(Error::Precondition(format!("need at least 10 terms, got {terms}")));
    }
    if !(alpha.is_finite() && alpha > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("bad Mittag-Leffler arguments α = {alpha}, z = {z}")));
    }
    let term = |k: usize| -> f64 {
        if k == 0 {
            return 1.0;
        }
        if z == 0.0 {
            return 0.0;
        }
        let kf = k as f64;
        let mag = (kf * z.abs().ln() - ln_gamma(alpha * kf + 1.0)).exp();
        if z < 0.0 && k % 2 == 1 {
            -mag
        } else {
            mag
        }
    };
    let mut value = 0.0;
    for k in 0..terms {
        value += term(k);
    }
    let last = term(terms - 1).abs();
    let omitted = term(terms).abs();
    if omitted > 0.0 && omitted >= last {
        return Err(Error::Accuracy(format!(
            "series terms still growing at cutoff {terms} (|z| = {} too large)",
            z.abs()
        )));
    }
    if !value.is_finite() {
        return Err(Error::Accuracy("series sum overflowed".into()));
    }
    Ok(OracleResult { value, error: omitted, method: OracleMethod::MlSeries })
}

fn midpoint(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        acc += f(a + (k as f64 + 0.5) * h);
    }
    acc * h
}

/// Composite midpoint rule on `[a, b]`; the error estimate compares with
/// the rule at half the panels.
pub fn brute_quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> Result<OracleResult> {
    if panels < 10_000 {
        return Err(Error::Precondition(format!("need at least 10^4 panels, got {panels}")));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::domain(format!("bad interval [{a}, {b}]")));
    }
    let fine = midpoint(&f, a, b, panels);
    let coarse = midpoint(&f, a, b, panels / 2);
    let error = (fine - coarse).abs();
    if !(fine.is_finite() && error.is_finite()) {
        return Err(Error::Evaluation(format!("quadrature of a non-integrable function on [{a}, {b}]")));
    }
    Ok(OracleResult { value: fine, error, method: OracleMethod::BruteQuadrature })
}

/// `(1/Γ(α)) ∫_0^t (t - s)^{α-1} g(s) ds` by brute force after the
/// substitution `r = (t - s)^α`, which turns the integrand into the bounded
/// `g(t - r^{1/α})/α` on `[0, t^α]`.
pub fn brute_rl_integral(g: impl Fn(f64) -> f64, alpha: FracOrder, t: f64, panels: usize) -> Result<OracleResult> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("t = {t} must be positive")));
    }
    let a = alpha.value();
    let scale = 1.0 / (a * sgamma(a));
    let r = brute_quadrature(|r| g(t - r.powf(1.0 / a)), 0.0, t.powf(a), panels)?;
    Ok(OracleResult { value: r.value * scale, error: r.error * scale, ..r })
}

/// `(1/Γ(α)) Σ_{s<t} (t - s)^{α-1} μ(s) g(s)` over a time scale that is
/// purely discrete below `t`, summed in ascending `s`.
pub fn discrete_ts_sum(ts: &TimeScale, g: impl Fn(f64) -> f64, alpha: FracOrder, t: f64) -> Result<OracleResult> {
    if !ts.is_discrete_below(t) {
        return Err(Error::domain(format!("time scale has a nondegenerate interval below {t}")));
    }
    let a = alpha.value();
    let mut acc = 0.0;
    for &(s, _) in ts.segments().iter().take_while(|&&(s, _)| s < t) {
        let mu = ts.mu(s)?;
        acc += (t - s).powf(a - 1.0) * mu * g(s);
    }
    Ok(OracleResult::exact(acc / crate::gamma::gamma(a), OracleMethod::DiscreteSum))
}
