use super::{
    check_positive, doubled_order, BoundReport, Hypotheses, RangeWatch, DENOMINATOR_FLOOR,
};
use crate::error::{Error, Result};
use crate::frac::ProductWeights;
use crate::func::{constant1, finite, Func1};
use crate::grid::{make_grid, sup_norm, trapezoid, weighted_sup, GridPolicy};
use crate::volterra::{iterate, IterationControl, Norm, SolveReport};

/// Weights tried by [`scan_weight`].
pub const WEIGHT_SCAN: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];

/// Riemann–Liouville thermistor problem on `[0, T]`.
#[derive(Clone)]
pub struct RlSpec {
    pub alpha: f64,
    pub lambda: f64,
    pub horizon: f64,
    pub f: Func1,
    pub h: Func1,
    /// `N` in the norm `sup e^{-Nt} |u(t)|`.
    pub weight: f64,
    pub hyp: Hypotheses,
    pub grid: GridPolicy,
}

impl RlSpec {
    /// Defaults: `h ≡ 0`, `N = 1`, 1024 panels graded with `γ = 1/(2α)`.
    pub fn new(alpha: f64, lambda: f64, horizon: f64, f: Func1, hyp: Hypotheses) -> Self {
        RlSpec {
            alpha,
            lambda,
            horizon,
            f,
            h: constant1(0.0),
            weight: 1.0,
            hyp,
            grid: GridPolicy::for_thermistor(1024, alpha),
        }
    }

    pub fn validate(&self) -> Result<()> {
        doubled_order(self.alpha)?;
        super::check_nonnegative("lambda", self.lambda)?;
        check_positive("horizon", self.horizon)?;
        check_positive("weight N", self.weight)?;
        self.hyp.validate()
    }
}

/// Largest λ for which the solution operator is a contraction in the
/// weighted norm:
/// `N^{2α} / (L_f (1/(c1 T)² + 2 c2² T e^{NT} / (c1 T)⁴))`, or `+∞` when `L_f = 0`.
pub fn rl_threshold(alpha: f64, horizon: f64, weight: f64, hyp: &Hypotheses) -> f64 {
    if hyp.lf == 0.0 {
        return f64::INFINITY;
    }
    let c1t = hyp.c1 * horizon;
    let growth = 1.0 / (c1t * c1t) + 2.0 * hyp.c2 * hyp.c2 * horizon * (weight * horizon).exp() / c1t.powi(4);
    weight.powf(2.0 * alpha) / (hyp.lf * growth)
}

pub fn uniqueness_threshold_rl(spec: &RlSpec) -> Result<f64> {
    spec.validate()?;
    Ok(rl_threshold(spec.alpha, spec.horizon, spec.weight, &spec.hyp))
}

/// The weight from [`WEIGHT_SCAN`] with the largest threshold, and that threshold.
pub fn scan_weight(spec: &RlSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    let mut best = (WEIGHT_SCAN[0], f64::NEG_INFINITY);
    for n in WEIGHT_SCAN {
        let l = rl_threshold(spec.alpha, spec.horizon, n, &spec.hyp);
        if l > best.1 {
            best = (n, l);
        }
    }
    Ok(best)
}

fn nodes_and_source(spec: &RlSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let nodes = make_grid(spec.horizon, spec.grid)?;
    let h = nodes
        .iter()
        .map(|&t| finite((spec.h)(t), "h", || format!("t = {t}")))
        .collect::<Result<Vec<f64>>>()?;
    Ok((nodes, h))
}

/// A priori bound in the weighted norm:
/// `((λ/(c1 T)²) f(0) + sup|h|) / N^{2α} · exp(λ L_f / (c1 T N^α)²)`.
pub fn bound_rl(spec: &RlSpec) -> Result<f64> {
    spec.validate()?;
    let (_, h) = nodes_and_source(spec)?;
    let f0 = finite((spec.f)(0.0), "f", || "u = 0".into())?;
    Ok(bound_from(spec, f0, sup_norm(&h)))
}

fn bound_from(spec: &RlSpec, f0: f64, h_inf: f64) -> f64 {
    let c1t = spec.hyp.c1 * spec.horizon;
    let na = spec.weight.powf(spec.alpha);
    ((spec.lambda / (c1t * c1t)) * f0 + h_inf) / (na * na)
        * (spec.lambda * spec.hyp.lf / (c1t * na).powi(2)).exp()
}

/// Picard iteration from `u ≡ 0`.
pub fn solve_rl(spec: &RlSpec, tol: f64, max_iter: usize) -> Result<(SolveReport, BoundReport)> {
    solve_rl_from(spec, 0.0, tol, max_iter)
}

/// Picard iteration from the constant iterate `u ≡ initial`.
///
/// Each sweep recomputes `D = (∫_0^T f(u) dx)²` by the trapezoid rule and
/// sets `u ← I^{2α}(λ f(u)/D + h)`. Stopping uses the weighted norm.
pub fn solve_rl_from(
    spec: &RlSpec,
    initial: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(SolveReport, BoundReport)> {
    spec.validate()?;
    let order = doubled_order(spec.alpha)?;
    let (nodes, h) = nodes_and_source(spec)?;
    let weights = ProductWeights::new(&nodes, order);
    let control = IterationControl::new(tol, max_iter).with_norm(Norm::Weighted(spec.weight));
    let mut watch = RangeWatch::default();
    let sweep = |u: &[f64], watch: &mut RangeWatch| -> Result<Vec<f64>> {
        let fu = nodes
            .iter()
            .zip(u)
            .map(|(&t, &v)| {
                let fv = finite((spec.f)(v), "f", || format!("u = {v} (t = {t})"))?;
                watch.observe(&spec.hyp, t, v, fv);
                Ok(fv)
            })
            .collect::<Result<Vec<f64>>>()?;
        let integral = trapezoid(&nodes, &fu);
        let denom = integral * integral;
        if !(denom >= DENOMINATOR_FLOOR) {
            return Err(Error::Singularity(format!("(∫ f(u) dx)² = {denom} on [0, {}]", spec.horizon)));
        }
        let source: Vec<f64> = fu.iter().zip(&h).map(|(fv, hv)| spec.lambda * fv / denom + hv).collect();
        Ok(weights.apply(&source))
    };
    let mut report = iterate(&nodes, vec![initial; nodes.len()], &control, |u| sweep(u, &mut watch))?;

    report.hypothesis_violations = watch.into_messages();
    report.hypothesis_violations.extend(spec.hyp.spot_check([0.0, 0.0], |_, u| (spec.f)(u)));
    let f0 = finite((spec.f)(0.0), "f", || "u = 0".into())?;
    let bound = bound_from(spec, f0, sup_norm(&h));
    let realized = weighted_sup(&nodes, report.solution.values(), spec.weight);
    let bounds = BoundReport {
        threshold: rl_threshold(spec.alpha, spec.horizon, spec.weight, &spec.hyp),
        bound: Some(bound),
        realized,
        satisfied: Some(realized <= bound * (1.0 + 1e-6)),
    };
    if spec.lambda >= bounds.threshold {
        report.warnings.push(format!(
            "λ = {} is not below the uniqueness threshold {}",
            spec.lambda, bounds.threshold
        ));
    }
    Ok((report, bounds))
}

/// `u(t) = (λ/(c T²) + H) t^{2α}/Γ(2α+1)` for `f ≡ c`, `h ≡ H`.
#[cfg(test)]
fn constant_solution(alpha: f64, lambda: f64, c: f64, big_h: f64, horizon: f64, t: f64) -> f64 {
    (lambda / (c * horizon * horizon) + big_h) * t.powf(2.0 * alpha) / crate::gamma::gamma(2.0 * alpha + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::func1;
    use crate::grid::sup_diff;
    use std::f64::consts::E;

    fn sigmoid() -> Func1 {
        func1(|u| 1.0 + 1.0 / (1.0 + u * u))
    }

    #[test]
    fn threshold_examples() {
        let hyp = Hypotheses::new(1.0, 1.0, 1.0);
        let l = rl_threshold(0.25, 1.0, 1.0, &hyp);
        assert!((l / (1.0 / (1.0 + 2.0 * E)) - 1.0).abs() < 1e-12);
        assert_eq!(rl_threshold(0.25, 1.0, 1.0, &Hypotheses::new(1.0, 1.0, 0.0)), f64::INFINITY);
        let l2 = rl_threshold(0.25, 1.0, 2.0, &hyp);
        let expect = 2f64.sqrt() / (1.0 + 2.0 * E * E);
        assert!((l2 - expect).abs() < 1e-14 && l2 != l);
    }

    #[test]
    fn threshold_decreases_in_lf_and_c2() {
        for &lf in &[0.5, 1.0, 2.0] {
            for &c2 in &[1.0, 1.5, 3.0] {
                let base = rl_threshold(0.3, 1.5, 1.0, &Hypotheses::new(1.0, c2, lf));
                assert!(rl_threshold(0.3, 1.5, 1.0, &Hypotheses::new(1.0, c2, lf * 1.1)) < base);
                assert!(rl_threshold(0.3, 1.5, 1.0, &Hypotheses::new(1.0, c2 * 1.1, lf)) < base);
            }
        }
    }

    #[test]
    fn weight_scan_picks_maximum() {
        let spec = RlSpec::new(0.25, 0.1, 1.0, sigmoid(), Hypotheses::new(1.0, 2.0, 0.65));
        let (n, l) = scan_weight(&spec).unwrap();
        for m in WEIGHT_SCAN {
            assert!(rl_threshold(0.25, 1.0, m, &spec.hyp) <= l);
        }
        assert!(WEIGHT_SCAN.contains(&n));
    }

    #[test]
    fn bound_example() {
        let spec = RlSpec::new(0.25, 0.1, 1.0, constant1(1.0), Hypotheses::new(1.0, 1.0, 0.0));
        assert!((bound_rl(&spec).unwrap() - 0.1).abs() < 1e-15);
        let tiny = RlSpec { lambda: 1e-12, ..spec };
        assert!(bound_rl(&tiny).unwrap() < 1e-11);
    }

    #[test]
    fn constant_f_closed_form() {
        let mut spec = RlSpec::new(0.25, 0.1, 1.0, constant1(1.0), Hypotheses::new(1.0, 1.0, 0.0));
        spec.grid = GridPolicy::for_thermistor(256, 0.25);
        let (r, b) = solve_rl(&spec, 1e-12, 50).unwrap();
        assert!(r.converged && r.iterations <= 3);
        let (t, u) = r.solution.last();
        assert!((u - constant_solution(0.25, 0.1, 1.0, 0.0, 1.0, t)).abs() < 1e-12);
        assert!((u - 0.112_837_916_709_551_26).abs() < 1e-12);
        assert!(b.satisfied == Some(true));
        assert!(r.hypothesis_violations.is_empty());
    }

    #[test]
    fn constant_f_with_source() {
        let mut spec = RlSpec::new(0.3, 0.2, 2.0, constant1(1.0), Hypotheses::new(1.0, 1.0, 0.0));
        spec.h = constant1(0.5);
        spec.grid = GridPolicy::uniform(64);
        let (r, _) = solve_rl(&spec, 1e-12, 50).unwrap();
        for (&t, &u) in r.solution.nodes().iter().zip(r.solution.values()) {
            assert!((u - constant_solution(0.3, 0.2, 1.0, 0.5, 2.0, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn sigmoid_runs_agree() {
        let hyp = Hypotheses::new(1.0, 2.0, 0.65);
        let lambda = 0.9 * rl_threshold(0.25, 1.0, 1.0, &hyp);
        let mut spec = RlSpec::new(0.25, lambda, 1.0, sigmoid(), hyp);
        spec.grid = GridPolicy::for_thermistor(128, 0.25);
        let tol = 1e-10;
        let (a, ba) = solve_rl_from(&spec, 0.0, tol, 200).unwrap();
        let (b, _) = solve_rl_from(&spec, 5.0, tol, 200).unwrap();
        assert!(a.converged && b.converged);
        assert!(sup_diff(a.solution.values(), b.solution.values()) <= 10.0 * tol);
        assert!(a.contraction_factor < 1.0 && b.contraction_factor < 1.0);
        assert_eq!(ba.satisfied, Some(true));
        assert!(a.hypothesis_violations.is_empty());
    }

    #[test]
    fn range_violation_is_reported() {
        let hyp = Hypotheses::new(1.0, 2.0, 0.65);
        let mut spec = RlSpec::new(0.25, 0.05, 1.0, func1(|u| 3.0 + u), hyp);
        spec.grid = GridPolicy::uniform(32);
        let (r, _) = solve_rl(&spec, 1e-10, 100).unwrap();
        assert!(!r.hypothesis_violations.is_empty());
    }

    #[test]
    fn zero_denominator_is_singular() {
        let spec = RlSpec::new(0.25, 0.1, 1.0, constant1(0.0), Hypotheses::new(1.0, 1.0, 0.0));
        assert!(matches!(solve_rl(&spec, 1e-10, 10), Err(Error::Singularity(_))));
    }

    #[test]
    fn invalid_specs() {
        let hyp = Hypotheses::new(1.0, 1.0, 0.0);
        assert!(RlSpec::new(0.5, 0.1, 1.0, constant1(1.0), hyp).validate().is_err());
        assert!(RlSpec::new(0.25, -0.1, 1.0, constant1(1.0), hyp).validate().is_err());
        assert!(RlSpec::new(0.25, 0.1, 0.0, constant1(1.0), hyp).validate().is_err());
    }
}
