use super::{check_nonnegative, doubled_order, BoundReport, Hypotheses, RangeWatch, DENOMINATOR_FLOOR};
use crate::error::{Error, Result};
use crate::func::{finite, Func1};
use crate::gamma::gamma;
use crate::grid::{sup_norm, GridPolicy};
use crate::timescale::{TimeScale, TsGrid, TsWeights};
use crate::volterra::{iterate, IterationControl, SolveReport};

/// Thermistor problem on a time scale starting at 0:
/// `u(t) = λ/Γ(2α) ∫_0^t (t - s)^{2α-1} f(u(s))/(∫_0^T f(u) Δx)² Δs`, `T = max 𝕋`.
#[derive(Clone)]
pub struct TsSpec {
    pub alpha: f64,
    pub lambda: f64,
    pub timescale: TimeScale,
    pub f: Func1,
    pub hyp: Hypotheses,
    /// Panels shared among the intervals of the time scale.
    pub grid: GridPolicy,
}

impl TsSpec {
    pub fn new(alpha: f64, lambda: f64, timescale: TimeScale, f: Func1, hyp: Hypotheses) -> Self {
        TsSpec { alpha, lambda, timescale, f, hyp, grid: GridPolicy::for_thermistor(1024, alpha) }
    }

    pub fn horizon(&self) -> f64 {
        self.timescale.max()
    }

    pub fn validate(&self) -> Result<()> {
        doubled_order(self.alpha)?;
        check_nonnegative("lambda", self.lambda)?;
        if self.timescale.min() != 0.0 {
            return Err(Error::domain(format!("time scale must start at 0, starts at {}", self.timescale.min())));
        }
        if !(self.horizon() > 0.0) {
            return Err(Error::domain("time scale must extend past 0"));
        }
        self.hyp.validate()
    }
}

/// `(T^{2α} L_f/((c1 T)² Γ(2α+1)) + 2 c2² T^{2(α+1)} L_f/((c1 T)⁴ Γ(2α+1)))^{-1}`,
/// or `+∞` when `L_f = 0`.
pub fn ts_threshold(alpha: f64, horizon: f64, hyp: &Hypotheses) -> f64 {
    if hyp.lf == 0.0 {
        return f64::INFINITY;
    }
    let g = gamma(2.0 * alpha + 1.0);
    let c1t = hyp.c1 * horizon;
    let first = horizon.powf(2.0 * alpha) * hyp.lf / (c1t * c1t * g);
    let second = 2.0 * hyp.c2 * hyp.c2 * horizon.powf(2.0 * (alpha + 1.0)) * hyp.lf / (c1t.powi(4) * g);
    1.0 / (first + second)
}

pub fn uniqueness_threshold_ts(spec: &TsSpec) -> Result<f64> {
    spec.validate()?;
    Ok(ts_threshold(spec.alpha, spec.horizon(), &spec.hyp))
}

/// Picard iteration from `u ≡ 0` with delta integrals on the time scale.
///
/// The report's bound is absent (no a priori bound is available on a
/// general time scale); `realized` is the sup norm.
pub fn solve_ts(spec: &TsSpec, tol: f64, max_iter: usize) -> Result<(SolveReport, BoundReport)> {
    solve_ts_from(spec, 0.0, tol, max_iter)
}

/// As [`solve_ts`], starting from `u ≡ initial`.
pub fn solve_ts_from(spec: &TsSpec, initial: f64, tol: f64, max_iter: usize) -> Result<(SolveReport, BoundReport)> {
    spec.validate()?;
    let order = doubled_order(spec.alpha)?;
    let grid = TsGrid::new(spec.timescale.clone(), spec.grid)?;
    let weights = TsWeights::new(&grid, order);
    let nodes = grid.nodes().to_vec();
    let last = nodes.len() - 1;
    let mut watch = RangeWatch::default();
    let mut sweep = |u: &[f64]| -> Result<Vec<f64>> {
        let mut fu = Vec::with_capacity(u.len());
        for (&t, &v) in nodes.iter().zip(u) {
            let fv = finite((spec.f)(v), "f", || format!("u = {v} (t = {t})"))?;
            watch.observe(&spec.hyp, t, v, fv);
            fu.push(fv);
        }
        let integral = crate::timescale::delta_integral_between(&grid, &fu, 0, last);
        let denom = integral * integral;
        if !(denom >= DENOMINATOR_FLOOR) {
            return Err(Error::Singularity(format!("(∫ f(u) Δx)² = {denom}")));
        }
        let scale = spec.lambda / denom;
        Ok(weights.apply(&fu).into_iter().map(|v| scale * v).collect())
    };
    let control = IterationControl::new(tol, max_iter);
    let mut report = iterate(&nodes, vec![initial; nodes.len()], &control, &mut sweep)?;
    report.hypothesis_violations = watch.into_messages();
    report.hypothesis_violations.extend(spec.hyp.spot_check([0.0, 0.0], |_, u| (spec.f)(u)));
    let threshold = ts_threshold(spec.alpha, spec.horizon(), &spec.hyp);
    if spec.lambda >= threshold {
        report.warnings.push(format!("λ = {} is not below the uniqueness threshold {threshold}", spec.lambda));
    }
    let bounds = BoundReport {
        threshold,
        bound: None,
        realized: sup_norm(report.solution.values()),
        satisfied: None,
    };
    Ok((report, bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{constant1, func1};
    use crate::grid::sup_diff;
    use crate::thermistor::{rl_threshold, solve_rl, RlSpec};

    #[test]
    fn threshold_example() {
        let t = ts_threshold(0.25, 1.0, &Hypotheses::new(1.0, 1.0, 1.0));
        assert!((t / (gamma(1.5) / 3.0) - 1.0).abs() < 1e-12);
        assert_eq!(ts_threshold(0.25, 1.0, &Hypotheses::new(1.0, 1.0, 0.0)), f64::INFINITY);
    }

    #[test]
    fn interval_matches_rl_solver() {
        let hyp = Hypotheses::new(1.0, 2.0, 0.65);
        let f = func1(|u| 1.0 + 1.0 / (1.0 + u * u));
        let lambda = 0.9 * rl_threshold(0.25, 1.0, 1.0, &hyp);
        let policy = GridPolicy::for_thermistor(128, 0.25);
        let mut rl = RlSpec::new(0.25, lambda, 1.0, f.clone(), hyp);
        rl.grid = policy;
        let mut ts = TsSpec::new(0.25, lambda, TimeScale::interval(0.0, 1.0).unwrap(), f, hyp);
        ts.grid = policy;
        let (a, _) = solve_rl(&rl, 1e-12, 100).unwrap();
        let (b, _) = solve_ts(&ts, 1e-12, 100).unwrap();
        assert_eq!(a.solution.nodes(), b.solution.nodes());
        assert!(sup_diff(a.solution.values(), b.solution.values()) < 1e-10);
    }

    #[test]
    fn double_run_below_threshold() {
        let hyp = Hypotheses::new(1.0, 2.0, 0.65);
        let ts = TimeScale::new(vec![(0.0, 0.5), (0.75, 0.75), (1.0, 1.0)]).unwrap();
        let f = func1(|u| 1.0 + 1.0 / (1.0 + u * u));
        let mut spec = TsSpec::new(0.25, 1.0, ts, f, hyp);
        spec.lambda = 0.9 * uniqueness_threshold_ts(&spec).unwrap();
        spec.grid = GridPolicy::for_thermistor(128, 0.25);
        let tol = 1e-11;
        let (a, _) = solve_ts_from(&spec, 0.0, tol, 200).unwrap();
        let (b, _) = solve_ts_from(&spec, 5.0, tol, 200).unwrap();
        assert!(a.converged && b.converged && a.contraction_factor < 1.0);
        assert!(sup_diff(a.solution.values(), b.solution.values()) <= 10.0 * tol);
    }

    #[test]
    fn three_point_scale() {
        // f ≡ 2 on {0, 1/2, 1}: u(t) = λ/(2·1)² · 2 · Σ_{s<t} (t-s)^{2α-1} μ(s) / Γ(2α)
        let spec = TsSpec::new(0.25, 0.3, TimeScale::points(&[0.0, 0.5, 1.0]).unwrap(), constant1(2.0), Hypotheses::new(2.0, 2.0, 0.0));
        let (r, b) = solve_ts(&spec, 1e-14, 20).unwrap();
        let k = 0.3 * 2.0 / 4.0 / gamma(0.5);
        let u = r.solution.values();
        assert_eq!(u[0], 0.0);
        assert!((u[1] - k * 0.5f64.powf(-0.5) * 0.5).abs() < 1e-15);
        assert!((u[2] - k * 0.5 * (1.0 + 0.5f64.powf(-0.5))).abs() < 1e-15);
        assert!((u[2] - 0.102_155_560_826_296_62).abs() < 1e-12, "{}", u[2]);
        assert_eq!(b.bound, None);
    }

    #[test]
    fn zero_lambda() {
        let spec = TsSpec::new(0.3, 0.0, TimeScale::new(vec![(0.0, 1.0), (1.5, 1.5)]).unwrap(), constant1(1.0), Hypotheses::new(1.0, 1.0, 0.0));
        let (r, _) = solve_ts(&spec, 1e-12, 10).unwrap();
        assert!(r.solution.values().iter().all(|&u| u == 0.0));
    }

    #[test]
    fn must_start_at_zero() {
        let spec = TsSpec::new(0.3, 0.1, TimeScale::interval(1.0, 2.0).unwrap(), constant1(1.0), Hypotheses::new(1.0, 1.0, 0.0));
        assert!(spec.validate().is_err());
    }
}
