use super::{
    check_nonnegative, check_positive, doubled_order, Hypotheses, RangeWatch, DENOMINATOR_FLOOR,
};
use crate::error::{Error, Result};
use crate::frac::kernel_row;
use crate::func::{finite, Func2};
use crate::gamma::gamma;
use crate::grid::{check_nodes, make_grid, make_grid_on, sup_diff, trapezoid_prefix, GridPolicy};
use crate::volterra::{iterate, IterationControl, SolveReport};

/// Caputo thermistor problem `ᶜD^{2α} u = λ f(t, u)/(∫_0^t f(x, u) dx)²`, `u(0) = u0`.
#[derive(Clone)]
pub struct CaputoSpec {
    pub alpha: f64,
    pub lambda: f64,
    pub u0: f64,
    pub f: Func2,
    pub hyp: Hypotheses,
    /// `M` in `f(s, u) <= M s²`.
    pub m: f64,
    /// `ω` in `|f(s, u) - f(s, v)| <= s^ω |u - v|`.
    pub omega: f64,
    /// Radius `b` of the ball around `u0` the local solution stays in.
    pub ball: f64,
    pub horizon: f64,
    /// Panels per window.
    pub grid: GridPolicy,
    /// Replaces `λ/(∫_0^t f dx)²` by a constant. Meant for testing the
    /// Volterra part in isolation.
    pub nonlocal_factor: Option<f64>,
}

impl CaputoSpec {
    /// Defaults: `M = 1`, `ω = 2`, `b = 1`, `T = 1`, 256 uniform panels.
    pub fn new(alpha: f64, lambda: f64, u0: f64, f: Func2, hyp: Hypotheses) -> Self {
        CaputoSpec {
            alpha,
            lambda,
            u0,
            f,
            hyp,
            m: 1.0,
            omega: 2.0,
            ball: 1.0,
            horizon: 1.0,
            grid: GridPolicy::uniform(256),
            nonlocal_factor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        doubled_order(self.alpha)?;
        check_nonnegative("lambda", self.lambda)?;
        if !self.u0.is_finite() {
            return Err(Error::domain(format!("u0 = {} must be finite", self.u0)));
        }
        check_positive("ball radius b", self.ball)?;
        check_positive("horizon", self.horizon)?;
        self.hyp.validate()?;
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(Error::Hypothesis(format!("M = {} must be positive", self.m)));
        }
        if !(self.omega >= 2.0) {
            return Err(Error::Hypothesis(format!("ω = {} must be >= 2", self.omega)));
        }
        if let Some(k) = self.nonlocal_factor {
            if !k.is_finite() {
                return Err(Error::domain(format!("nonlocal factor {k} must be finite")));
            }
        }
        Ok(())
    }

    /// `(b (λM/(Γ(2α+1) c1²))^{-1})^{1/(2α)}`, infinite when `λ = 0`.
    fn radius_branch(&self) -> f64 {
        let two_a = 2.0 * self.alpha;
        let rate = self.lambda * self.m / (gamma(two_a + 1.0) * self.hyp.c1 * self.hyp.c1);
        if rate == 0.0 {
            return f64::INFINITY;
        }
        (self.ball / rate).powf(1.0 / two_a)
    }
}

/// Length of the interval on which the local solution is constructed.
pub fn caputo_local_radius(spec: &CaputoSpec) -> Result<f64> {
    spec.validate()?;
    Ok(spec.radius_branch().min(spec.horizon))
}

/// Length of each continuation window: the local radius capped at 1.
pub fn continuation_window(spec: &CaputoSpec) -> Result<f64> {
    spec.validate()?;
    Ok(spec.radius_branch().min(1.0))
}

/// Solves on `[0, h]` with `h = caputo_local_radius(spec)`, starting from `u ≡ u0`.
pub fn solve_caputo_local(spec: &CaputoSpec, tol: f64, max_iter: usize) -> Result<SolveReport> {
    solve_caputo_local_from(spec, spec.u0, tol, max_iter)
}

/// As [`solve_caputo_local`], with the first iterate `u ≡ initial` after `t = 0`.
pub fn solve_caputo_local_from(spec: &CaputoSpec, initial: f64, tol: f64, max_iter: usize) -> Result<SolveReport> {
    let h = caputo_local_radius(spec)?;
    let nodes = make_grid(h, spec.grid)?;
    solve_with_history(spec, nodes, &[spec.u0], initial, tol, max_iter)
}

/// Uniqueness diagnostic: solves locally from `u ≡ u0` and from
/// `u ≡ u0 + b` and returns the sup distance between the two limits.
///
/// No closed-form threshold is known for this problem; a distance of a
/// few `tol` is the operational evidence that the fixed point is unique.
pub fn caputo_double_run(spec: &CaputoSpec, tol: f64, max_iter: usize) -> Result<f64> {
    let first = solve_caputo_local(spec, tol, max_iter)?;
    let second = solve_caputo_local_from(spec, spec.u0 + spec.ball, tol, max_iter)?;
    for r in [first.clone(), second.clone()] {
        if !r.converged {
            return Err(Error::Divergence(Box::new(r)));
        }
    }
    Ok(sup_diff(first.solution.values(), second.solution.values()))
}

/// Solves on an arbitrary node set starting at 0.
pub fn solve_caputo_on(spec: &CaputoSpec, nodes: Vec<f64>, tol: f64, max_iter: usize) -> Result<SolveReport> {
    spec.validate()?;
    check_nodes(&nodes)?;
    if nodes[0] != 0.0 {
        return Err(Error::domain(format!("first node {} must be 0", nodes[0])));
    }
    solve_with_history(spec, nodes, &[spec.u0], spec.u0, tol, max_iter)
}

/// Extends a converged solution on `[0, β]` to `[0, β + h']`.
///
/// The previous values are frozen; only the new window is iterated. The
/// history integrals over `[0, β]` still see the window through the
/// denominator `∫_0^t f dx`, which runs up to the output node.
pub fn continue_caputo(prev: &SolveReport, spec: &CaputoSpec, tol: f64, max_iter: usize) -> Result<SolveReport> {
    if !prev.converged {
        return Err(Error::Precondition("cannot continue a solve that did not converge".into()));
    }
    let window = continuation_window(spec)?;
    let (beta, _) = prev.solution.last();
    let local = make_grid_on(beta, beta + window, spec.grid)?;
    let mut nodes = prev.solution.nodes().to_vec();
    nodes.extend_from_slice(&local[1..]);
    let fill = prev.solution.last().1;
    let mut report = solve_with_history(spec, nodes, prev.solution.values(), fill, tol, max_iter)?;
    let mut warnings = prev.warnings.clone();
    warnings.append(&mut report.warnings);
    report.warnings = warnings;
    Ok(report)
}

/// Picard iteration for the nodes after `frozen`, which holds the already
/// known values at the leading nodes (at least `u(0) = u0`). The unknown
/// nodes start at `fill`.
fn solve_with_history(
    spec: &CaputoSpec,
    nodes: Vec<f64>,
    frozen: &[f64],
    fill: f64,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    spec.validate()?;
    let two_a = doubled_order(spec.alpha)?.value();
    let m = frozen.len() - 1;
    let f_at = |t: f64, u: f64| finite((spec.f)(t, u), "f", || format!("t = {t}, u = {u}"));
    let f_frozen = nodes[..=m]
        .iter()
        .zip(frozen)
        .map(|(&t, &u)| f_at(t, u))
        .collect::<Result<Vec<f64>>>()?;
    let p_m = *trapezoid_prefix(&nodes[..=m], &f_frozen).last().unwrap_or(&0.0);

    // Row i > m splits into the frozen history and the weights on m+1..=i.
    let inv_gamma = 1.0 / gamma(two_a);
    let mut history = Vec::with_capacity(nodes.len() - m - 1);
    let mut rows = Vec::with_capacity(nodes.len() - m - 1);
    for i in m + 1..nodes.len() {
        let row = kernel_row(&nodes[..=i], two_a, nodes[i], inv_gamma);
        history.push(row[..=m].iter().zip(&f_frozen).map(|(w, f)| w * f).sum::<f64>());
        rows.push(row[m + 1..].to_vec());
    }

    let mut watch = RangeWatch::default();
    let mut sweep = |u: &[f64]| -> Result<Vec<f64>> {
        let mut fu = Vec::with_capacity(rows.len());
        for (&t, &v) in nodes[m + 1..].iter().zip(&u[m + 1..]) {
            let fv = f_at(t, v)?;
            watch.observe(&spec.hyp, t, v, fv);
            fu.push(fv);
        }
        let mut out = frozen.to_vec();
        let mut prefix = p_m;
        let mut prev_f = f_frozen[m];
        for (k, row) in rows.iter().enumerate() {
            let i = m + 1 + k;
            prefix += 0.5 * (nodes[i] - nodes[i - 1]) * (prev_f + fu[k]);
            prev_f = fu[k];
            let factor = match spec.nonlocal_factor {
                Some(c) => c,
                None => {
                    let denom = prefix * prefix;
                    if !(denom >= DENOMINATOR_FLOOR) {
                        return Err(Error::Singularity(format!(
                            "(∫_0^t f dx)² = {denom} at t = {}",
                            nodes[i]
                        )));
                    }
                    spec.lambda / denom
                }
            };
            let integral = history[k] + row.iter().zip(&fu).map(|(w, f)| w * f).sum::<f64>();
            out.push(spec.u0 + factor * integral);
        }
        Ok(out)
    };

    let mut initial = frozen.to_vec();
    initial.resize(nodes.len(), fill);
    let control = IterationControl::new(tol, max_iter);
    let mut report = iterate(&nodes, initial, &control, &mut sweep)?;
    report.hypothesis_violations = watch.into_messages();
    let (t_end, _) = report.solution.last();
    report.hypothesis_violations.extend(spec.hyp.spot_check([0.0, t_end], |s, u| (spec.f)(s, u)));
    Ok(report)
}

/// Smallest `a` with `λ f(t_j, u_j)/(∫_0^{t_j} f dx)² <= a |u_j|` at every
/// node, the denominator at `t_0` taken at `t_1`. This is the linear bound
/// fed to the Gronwall envelope.
pub fn nonlocal_linear_bound(spec: &CaputoSpec, report: &SolveReport) -> Result<f64> {
    spec.validate()?;
    let nodes = report.solution.nodes();
    let u = report.solution.values();
    let fu = nodes.iter().zip(u).map(|(&t, &v)| (spec.f)(t, v)).collect::<Vec<f64>>();
    let prefix = trapezoid_prefix(nodes, &fu);
    let mut a: f64 = 0.0;
    for j in 0..nodes.len() {
        if u[j] == 0.0 {
            return Err(Error::Precondition(format!("u vanishes at t = {}; no linear bound", nodes[j])));
        }
        let factor = match spec.nonlocal_factor {
            Some(c) => c.abs(),
            None => spec.lambda / prefix[j.max(1)].powi(2),
        };
        a = a.max(factor * fu[j].abs() / u[j].abs());
    }
    if !a.is_finite() {
        return Err(Error::Singularity("linear bound is not finite".into()));
    }
    Ok(a)
}

/// Samples `c3 <= |f(s, x)| <= c4 |x| + c5` on `[0, T] × [-b, b]`.
pub fn check_global_growth(spec: &CaputoSpec, c3: f64, c4: f64, c5: f64) -> Result<bool> {
    for (name, v) in [("c3", c3), ("c4", c4), ("c5", c5)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Precondition(format!("{name} = {v} must be nonnegative")));
        }
    }
    const S: usize = 33;
    const X: usize = 129;
    let r = spec.ball;
    for i in 0..S {
        let s = spec.horizon * i as f64 / (S - 1) as f64;
        for j in 0..X {
            let x = -r + 2.0 * r * j as f64 / (X - 1) as f64;
            let v = (spec.f)(s, x).abs();
            let upper = c4 * x.abs() + c5;
            if !(v.is_finite() && v >= c3 * (1.0 - 1e-12) && v <= upper * (1.0 + 1e-12) + 1e-300) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{constant2, func2};
    use crate::grid::sup_diff;

    fn unit_spec(f: Func2) -> CaputoSpec {
        CaputoSpec::new(0.25, 1.0, 0.5, f, Hypotheses::new(1.0, 1.0, 0.0))
    }

    #[test]
    fn radius_examples() {
        let mut spec = unit_spec(constant2(1.0));
        spec.horizon = 10.0;
        let g = gamma(1.5);
        assert!((caputo_local_radius(&spec).unwrap() - g * g).abs() < 1e-14);
        spec.horizon = 0.5;
        assert_eq!(caputo_local_radius(&spec).unwrap(), 0.5);
        spec.horizon = 100.0;
        let base = caputo_local_radius(&spec).unwrap();
        spec.ball = 2.0;
        assert!((caputo_local_radius(&spec).unwrap() / base - 4.0).abs() < 1e-12);
        spec.ball = 1.0;
        spec.lambda = 0.01;
        assert_eq!(continuation_window(&spec).unwrap(), 1.0);
    }

    #[test]
    fn constant_factor_hook() {
        let mut spec = unit_spec(constant2(1.0));
        spec.nonlocal_factor = Some(0.7);
        spec.grid = GridPolicy::uniform(32);
        let r = solve_caputo_local(&spec, 1e-12, 20).unwrap();
        assert!(r.converged);
        for (&t, &u) in r.solution.nodes().iter().zip(r.solution.values()) {
            assert!((u - (0.5 + 0.7 * t.sqrt() / gamma(1.5))).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_f_closed_form() {
        // f ≡ 1: u(t) = u0 + λ t^{2α-2}/Γ(2α+1), exact for the discretization too.
        let mut spec = unit_spec(constant2(1.0));
        spec.grid = GridPolicy::uniform(64);
        let r = solve_caputo_local(&spec, 1e-12, 20).unwrap();
        assert!(r.converged && r.iterations <= 2);
        for (&t, &u) in r.solution.nodes().iter().zip(r.solution.values()).skip(1) {
            let exact = 0.5 + t.powf(-1.5) / gamma(1.5);
            assert!((u - exact).abs() <= 1e-12 * exact);
        }
        assert_eq!(r.solution.values()[0], 0.5);
    }

    #[test]
    fn zero_lambda_is_constant() {
        let mut spec = unit_spec(func2(|_, u| 1.0 + (-u).exp()));
        spec.hyp = Hypotheses::new(1.0, 2.0, 1.0);
        spec.lambda = 0.0;
        spec.grid = GridPolicy::uniform(16);
        let r = solve_caputo_local(&spec, 1e-12, 20).unwrap();
        assert!(r.solution.values().iter().all(|&u| u == 0.5));
        let c = continue_caputo(&r, &spec, 1e-12, 20).unwrap();
        assert!(c.solution.values().iter().all(|&u| u == 0.5));
        assert_eq!(c.solution.last().0, 2.0);
    }

    #[test]
    fn continuation_matches_direct_solve() {
        let mut spec = unit_spec(func2(|_, u| 1.0 + (-u * u).exp()));
        spec.hyp = Hypotheses::new(1.0, 2.0, 1.0);
        spec.lambda = 0.05;
        spec.u0 = 1.0;
        spec.horizon = 1.0;
        spec.grid = GridPolicy::uniform(32);
        let tol = 1e-11;
        let local = solve_caputo_local(&spec, tol, 100).unwrap();
        let cont = continue_caputo(&local, &spec, tol, 100).unwrap();
        let direct = solve_caputo_on(&spec, cont.solution.nodes().to_vec(), tol, 100).unwrap();
        assert!(cont.converged && direct.converged);
        assert!(sup_diff(cont.solution.values(), direct.solution.values()) <= 5.0 * tol);
    }

    #[test]
    fn double_run_agrees() {
        let mut spec = unit_spec(func2(|_, u| 1.0 + (-u * u).exp()));
        spec.hyp = Hypotheses::new(1.0, 2.0, 1.0);
        spec.lambda = 0.05;
        spec.u0 = 1.0;
        spec.grid = GridPolicy::uniform(32);
        let tol = 1e-11;
        assert!(caputo_double_run(&spec, tol, 200).unwrap() <= 10.0 * tol);
        let far = solve_caputo_local_from(&spec, 3.0, tol, 200).unwrap();
        assert_eq!(far.solution.values()[0], 1.0);
    }

    #[test]
    fn continuation_needs_converged_input() {
        let mut spec = unit_spec(constant2(1.0));
        spec.grid = GridPolicy::uniform(8);
        let mut r = solve_caputo_local(&spec, 1e-12, 20).unwrap();
        r.converged = false;
        assert!(matches!(continue_caputo(&r, &spec, 1e-12, 20), Err(Error::Precondition(_))));
    }

    #[test]
    fn vanishing_denominator_is_singular() {
        let mut spec = unit_spec(constant2(0.0));
        spec.grid = GridPolicy::uniform(8);
        assert!(matches!(solve_caputo_local(&spec, 1e-12, 20), Err(Error::Singularity(_))));
    }

    #[test]
    fn growth_checks() {
        let mut spec = unit_spec(constant2(1.0));
        spec.ball = 2.0;
        assert!(check_global_growth(&spec, 0.5, 1.0, 1.0).unwrap());
        spec.f = func2(|_, u| u * u);
        assert!(!check_global_growth(&spec, 0.0, 1.0, 0.0).unwrap());
        spec.f = func2(|_, u| 1.0 + u.sin().abs());
        assert!(check_global_growth(&spec, 1.0, 0.0, 2.0).unwrap());
        assert!(check_global_growth(&spec, -1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn spec_validation() {
        let mut spec = unit_spec(constant2(1.0));
        spec.omega = 1.0;
        assert!(matches!(spec.validate(), Err(Error::Hypothesis(_))));
        let mut spec = unit_spec(constant2(1.0));
        spec.ball = 0.0;
        assert!(spec.validate().is_err());
    }
}
