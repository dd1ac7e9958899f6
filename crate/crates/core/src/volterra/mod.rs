//! Weakly singular Volterra equations of the second kind,
//!
//! ```text
//! u(t) = u0 + 1/Γ(α) ∫_0^t (t - s)^{α-1} F(s, u(s)) ds,
//! ```
//!
//! solved by Picard iteration over product-integration weights, plus the
//! Abel-equation front ends in [`abel`].

pub mod abel;
mod iteration;

pub use abel::{abel_first_kind_convolution, abel_second_kind};
pub use iteration::{iterate, IterationControl, Norm, SolveReport, DIVERGENCE_STREAK};

use crate::error::{Error, Result};
use crate::frac::ProductWeights;
use crate::func::{finite, Func2};
use crate::grid::{make_grid, FracOrder, GridPolicy};

#[derive(Clone)]
pub struct VolterraProblem {
    pub order: FracOrder,
    pub u0: f64,
    /// The full factor multiplying the kernel, as a function of `(s, u)`.
    pub integrand: Func2,
    pub horizon: f64,
    pub grid: GridPolicy,
    pub norm: Norm,
}

impl VolterraProblem {
    pub fn new(order: FracOrder, u0: f64, integrand: Func2, horizon: f64, grid: GridPolicy) -> Self {
        VolterraProblem { order, u0, integrand, horizon, grid, norm: Norm::Sup }
    }

    pub fn nodes(&self) -> Result<Vec<f64>> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::domain(format!("horizon {} must be positive", self.horizon)));
        }
        make_grid(self.horizon, self.grid)
    }
}

/// The discretized integral operator of a [`VolterraProblem`].
pub struct VolterraOperator<'a> {
    problem: &'a VolterraProblem,
    nodes: Vec<f64>,
    weights: ProductWeights,
}

impl<'a> VolterraOperator<'a> {
    pub fn new(problem: &'a VolterraProblem) -> Result<Self> {
        let nodes = problem.nodes()?;
        let weights = ProductWeights::new(&nodes, problem.order);
        Ok(VolterraOperator { problem, nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        let f = &self.problem.integrand;
        let integrand = self
            .nodes
            .iter()
            .zip(u)
            .map(|(&s, &v)| finite(f(s, v), "integrand", || format!("s = {s}, u = {v}")))
            .collect::<Result<Vec<f64>>>()?;
        let u0 = self.problem.u0;
        let mut out: Vec<f64> = self.weights.apply(&integrand).into_iter().map(|v| u0 + v).collect();
        out[0] = u0;
        Ok(out)
    }
}

/// Picard iteration from the constant initial iterate `u ≡ u0`.
pub fn picard_solve(problem: &VolterraProblem, tol: f64, max_iter: usize) -> Result<SolveReport> {
    let op = VolterraOperator::new(problem)?;
    let control = IterationControl::new(tol, max_iter).with_norm(problem.norm);
    let initial = vec![problem.u0; op.nodes().len()];
    iterate(op.nodes(), initial, &control, |u| op.apply(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{constant2, func2};
    use crate::gamma::gamma;
    use crate::grid::sup_diff;

    #[test]
    fn constant_integrand_fixed_point() {
        let order = FracOrder::new(0.5).unwrap();
        let p = VolterraProblem::new(order, 0.0, constant2(1.0), 1.0, GridPolicy::graded(64, 2.0));
        let r = picard_solve(&p, 1e-12, 50).unwrap();
        assert!(r.converged);
        assert!(r.iterations <= 2);
        assert!((r.solution.last().1 - 1.0 / gamma(1.5)).abs() < 1e-12);
    }

    #[test]
    fn zero_integrand_keeps_initial_value() {
        let order = FracOrder::new(0.3).unwrap();
        let p = VolterraProblem::new(order, 4.0, constant2(0.0), 2.0, GridPolicy::uniform(16));
        let r = picard_solve(&p, 1e-12, 50).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(r.solution.values().iter().all(|v| *v == 4.0));
    }

    #[test]
    fn linear_problem_is_mittag_leffler() {
        // E_{1/2}(t^{1/2}) at t = 0.25 from the 60-term series.
        let expect = 1.952_360_489_182_557;
        let order = FracOrder::new(0.5).unwrap();
        let p = VolterraProblem::new(order, 1.0, func2(|_, u| u), 0.25, GridPolicy::graded(512, 2.0));
        let r = picard_solve(&p, 1e-13, 200).unwrap();
        assert!(r.converged);
        assert!((r.solution.last().1 - expect).abs() < 1e-5);
        assert!(r.contraction_factor < 1.0);
    }

    #[test]
    fn residual_within_two_tolerances() {
        let order = FracOrder::new(0.4).unwrap();
        let tol = 1e-9;
        let p = VolterraProblem::new(
            order,
            0.5,
            func2(|s, u| (s - u).cos()),
            1.0,
            GridPolicy::graded(128, 1.5),
        );
        let r = picard_solve(&p, tol, 200).unwrap();
        let op = VolterraOperator::new(&p).unwrap();
        let again = op.apply(r.solution.values()).unwrap();
        assert!(sup_diff(&again, r.solution.values()) <= 2.0 * tol);
    }

    #[test]
    fn nan_integrand_is_evaluation_error() {
        let order = FracOrder::new(0.4).unwrap();
        let p = VolterraProblem::new(order, -1.0, func2(|_, u| u.sqrt()), 1.0, GridPolicy::uniform(8));
        assert!(matches!(picard_solve(&p, 1e-8, 10), Err(Error::Evaluation(_))));
    }

    #[test]
    fn explosive_integrand_is_divergence() {
        let order = FracOrder::new(0.9).unwrap();
        let p = VolterraProblem::new(order, 1.0, func2(|_, u| u * u * u), 5.0, GridPolicy::uniform(32));
        assert!(matches!(picard_solve(&p, 1e-8, 200), Err(Error::Divergence(_))));
    }
}
