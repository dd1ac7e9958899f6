//! Fractional thermistor problems with a nonlocal denominator:
//!
//! * Riemann–Liouville on `[0, T]`: `D^{2α} u = λ f(u)/(∫_0^T f(u) dx)² + h(t)`, `u(0) = 0`;
//! * Caputo on the half-axis: `ᶜD^{2α} u = λ f(t, u)/(∫_0^t f(x, u) dx)²`, `u(0) = u0`,
//!   solved locally and continued window by window;
//! * the same Riemann–Liouville problem posed on a time scale.
//!
//! Hypothesis constants (`c1 <= f <= c2`, Lipschitz constant `L_f`, ...) are
//! asserted by the caller. Solvers spot-check them on sampled values and
//! attach any contradiction to the report instead of failing.

mod caputo;
mod gronwall;
mod rl;
mod ts;

pub use caputo::{
    caputo_double_run, caputo_local_radius, check_global_growth, continuation_window,
    continue_caputo, nonlocal_linear_bound, solve_caputo_local, solve_caputo_local_from,
    solve_caputo_on, CaputoSpec,
};
pub use gronwall::gronwall_envelope;
pub use rl::{
    bound_rl, rl_threshold, scan_weight, solve_rl, solve_rl_from, uniqueness_threshold_rl, RlSpec,
    WEIGHT_SCAN,
};
pub use ts::{solve_ts, solve_ts_from, ts_threshold, uniqueness_threshold_ts, TsSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FracOrder;

/// Smallest admissible nonlocal denominator before the problem counts as singular.
pub const DENOMINATOR_FLOOR: f64 = 1e-30;

/// Relative slack on the sampled hypothesis checks.
const SAMPLE_SLACK: f64 = 1e-9;
const SAMPLES: usize = 257;

/// Constants asserted for the nonlinearity: `c1 <= f <= c2` and
/// `|f(u) - f(v)| <= lf |u - v|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub c1: f64,
    pub c2: f64,
    pub lf: f64,
    /// `u` range sampled by the spot check.
    #[serde(default = "default_sample")]
    pub sample: [f64; 2],
}

fn default_sample() -> [f64; 2] {
    [0.0, 10.0]
}

impl Hypotheses {
    pub fn new(c1: f64, c2: f64, lf: f64) -> Self {
        Hypotheses { c1, c2, lf, sample: default_sample() }
    }

    pub fn validate(&self) -> Result<()> {
        let Hypotheses { c1, c2, lf, sample } = *self;
        if !(c1.is_finite() && c2.is_finite() && c1 > 0.0 && c1 <= c2) {
            return Err(Error::Hypothesis(format!("need 0 < c1 <= c2, got c1 = {c1}, c2 = {c2}")));
        }
        if !(lf.is_finite() && lf >= 0.0) {
            return Err(Error::Hypothesis(format!("Lipschitz constant {lf} must be >= 0")));
        }
        if !(sample[0].is_finite() && sample[1].is_finite() && sample[0] <= sample[1]) {
            return Err(Error::domain(format!("bad sample range {sample:?}")));
        }
        Ok(())
    }

    fn in_range(&self, v: f64) -> bool {
        let slack = SAMPLE_SLACK * self.c2;
        v >= self.c1 - slack && v <= self.c2 + slack
    }

    /// Samples `f(s, u)` on `s_range × sample` and reports the first value
    /// outside `[c1, c2]` and the first difference quotient in `u` above `lf`.
    pub fn spot_check(&self, s_range: [f64; 2], f: impl Fn(f64, f64) -> f64) -> Vec<String> {
        let mut out = Vec::new();
        let [lo, hi] = self.sample;
        let du = (hi - lo) / (SAMPLES - 1) as f64;
        let s_steps = if s_range[0] == s_range[1] { 1 } else { 9 };
        let mut bad_range = None;
        let mut bad_lip = None;
        for k in 0..s_steps {
            let s = s_range[0] + (s_range[1] - s_range[0]) * k as f64 / (s_steps.max(2) - 1) as f64;
            let mut prev: Option<(f64, f64)> = None;
            for j in 0..SAMPLES {
                let u = lo + du * j as f64;
                let v = f(s, u);
                if bad_range.is_none() && !self.in_range(v) {
                    bad_range = Some(format!("f = {v} at u = {u} (s = {s}) lies outside [{}, {}]", self.c1, self.c2));
                }
                if let Some((pu, pv)) = prev {
                    let q = (v - pv).abs() / (u - pu);
                    if bad_lip.is_none() && q > self.lf * (1.0 + SAMPLE_SLACK) + SAMPLE_SLACK {
                        bad_lip = Some(format!(
                            "difference quotient {q} near u = {u} (s = {s}) exceeds L_f = {}",
                            self.lf
                        ));
                    }
                }
                prev = Some((u, v));
            }
        }
        out.extend(bad_range);
        out.extend(bad_lip);
        out
    }
}

/// Thermistor problems need `2α ∈ (0, 1)`.
pub(crate) fn doubled_order(alpha: f64) -> Result<FracOrder> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::domain(format!("thermistor order α = {alpha} outside (0, 1/2)")));
    }
    FracOrder::new(2.0 * alpha)
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} must be positive")))
    }
}

pub(crate) fn check_nonnegative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} must be nonnegative")))
    }
}

/// Records the first iterate value of `f` that leaves `[c1, c2]`.
#[derive(Default)]
pub(crate) struct RangeWatch {
    first: Option<String>,
}

impl RangeWatch {
    pub(crate) fn observe(&mut self, hyp: &Hypotheses, s: f64, u: f64, fv: f64) {
        if self.first.is_none() && !hyp.in_range(fv) {
            self.first = Some(format!(
                "iterate gives f = {fv} at t = {s}, u = {u}, outside [{}, {}]",
                hyp.c1, hyp.c2
            ));
        }
    }

    pub(crate) fn into_messages(self) -> Vec<String> {
        self.first.into_iter().collect()
    }
}

/// Threshold, a priori bound and realized norm of a thermistor solve.
///
/// Non-finite values (an unconstrained threshold) serialize as `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub threshold: f64,
    pub bound: Option<f64>,
    pub realized: f64,
    pub satisfied: Option<bool>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypotheses_validation() {
        assert!(Hypotheses::new(1.0, 2.0, 0.5).validate().is_ok());
        assert!(matches!(Hypotheses::new(0.0, 2.0, 0.5).validate(), Err(Error::Hypothesis(_))));
        assert!(matches!(Hypotheses::new(3.0, 2.0, 0.5).validate(), Err(Error::Hypothesis(_))));
        assert!(matches!(Hypotheses::new(1.0, 2.0, -1.0).validate(), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn spot_check_sigmoid() {
        let hyp = Hypotheses::new(1.0, 2.0, 0.65);
        let f = |_: f64, u: f64| 1.0 + 1.0 / (1.0 + u * u);
        assert!(hyp.spot_check([0.0, 0.0], f).is_empty());
        let tight = Hypotheses::new(1.0, 2.0, 0.5);
        assert_eq!(tight.spot_check([0.0, 0.0], f).len(), 1);
        let low = Hypotheses::new(1.5, 2.0, 0.65);
        assert_eq!(low.spot_check([0.0, 0.0], f).len(), 1);
    }

    #[test]
    fn order_range() {
        assert!(doubled_order(0.25).is_ok());
        assert!(doubled_order(0.5).is_err());
        assert!(doubled_order(0.0).is_err());
    }
}
