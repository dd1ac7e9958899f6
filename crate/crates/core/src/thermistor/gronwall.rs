use crate::error::{Error, Result};
use crate::frac::kernel_row;
use crate::grid::{FracOrder, GridFn};
use crate::volterra::SolveReport;

/// Smallest `v` on the grid of `w` with
/// `v(t) = w(t) + a ∫_0^t v(s) (t - s)^{-α} ds`.
///
/// Any `v` satisfying the inequality version is dominated by this
/// envelope. The discrete system is lower triangular, so its Neumann series
/// is summed exactly by forward substitution; the series diverges at the
/// grid scale when some diagonal weight `a w_ii` reaches 1.
pub fn gronwall_envelope(w: &GridFn, a: f64, alpha: FracOrder) -> Result<GridFn> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::Precondition(format!("a = {a} must be nonnegative")));
    }
    if let Some(bad) = w.values().iter().find(|&&v| v < 0.0) {
        return Err(Error::Precondition(format!("w must be nonnegative, found {bad}")));
    }
    let nodes = w.nodes();
    let beta = 1.0 - alpha.value();
    let mut v: Vec<f64> = Vec::with_capacity(nodes.len());
    v.push(w.values()[0]);
    for i in 1..nodes.len() {
        let row = kernel_row(&nodes[..=i], beta, nodes[i], a);
        let diag = row[i];
        if diag >= 1.0 {
            return Err(Error::Divergence(Box::new(SolveReport {
                solution: w.clone(),
                iterations: 0,
                differences: Vec::new(),
                contraction_factor: diag,
                residual: f64::INFINITY,
                converged: false,
                warnings: vec![format!(
                    "Neumann series diverges: diagonal weight {diag} >= 1 at t = {}",
                    nodes[i]
                )],
                hypothesis_violations: Vec::new(),
            })));
        }
        let past: f64 = row[..i].iter().zip(&v).map(|(r, x)| r * x).sum();
        v.push((w.values()[i] + past) / (1.0 - diag));
    }
    GridFn::new(nodes.to_vec(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;
    use crate::grid::{make_grid, GridPolicy};

    fn series(a: f64, t: f64) -> f64 {
        let x = a * gamma(0.5) * t.sqrt();
        let mut sum = 0.0;
        let mut pow = 1.0;
        for k in 0..80 {
            sum += pow / gamma(k as f64 / 2.0 + 1.0);
            pow *= x;
        }
        sum
    }

    #[test]
    fn matches_series() {
        let nodes = make_grid(1.0, GridPolicy::uniform(1024)).unwrap();
        let w = GridFn::constant(nodes, 1.0).unwrap();
        let env = gronwall_envelope(&w, 0.1, FracOrder::new(0.5).unwrap()).unwrap();
        for (idx, t) in [(256, 0.25), (512, 0.5), (1024, 1.0)] {
            assert_eq!(env.nodes()[idx], t);
            assert!((env.values()[idx] - series(0.1, t)).abs() < 1e-4);
        }
        assert!((series(0.1, 1.0) - 1.236_156_519_201_175).abs() < 1e-12);
    }

    #[test]
    fn trivial_cases() {
        let order = FracOrder::new(0.3).unwrap();
        let nodes = make_grid(1.0, GridPolicy::uniform(16)).unwrap();
        let zero = GridFn::constant(nodes.clone(), 0.0).unwrap();
        assert!(gronwall_envelope(&zero, 0.5, order).unwrap().values().iter().all(|&v| v == 0.0));
        let w = GridFn::from_fn(nodes, |t| 1.0 + t).unwrap();
        assert_eq!(gronwall_envelope(&w, 0.0, order).unwrap(), w);
        let small = gronwall_envelope(&w, 1e-9, order).unwrap();
        assert!(small.values().iter().zip(w.values()).all(|(e, x)| (e - x).abs() < 1e-8));
    }

    #[test]
    fn dominates_subsolutions() {
        let order = FracOrder::new(0.5).unwrap();
        let nodes = make_grid(1.0, GridPolicy::uniform(64)).unwrap();
        let w = GridFn::constant(nodes.clone(), 1.0).unwrap();
        let env = gronwall_envelope(&w, 0.2, order).unwrap();
        // v = 1 + 0.2 ∫ (t-s)^{-1/2} ds = 1 + 0.4 sqrt(t) satisfies the inequality.
        for (&t, &e) in nodes.iter().zip(env.values()) {
            assert!(1.0 + 0.4 * t.sqrt() <= e + 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let order = FracOrder::new(0.5).unwrap();
        let nodes = make_grid(1.0, GridPolicy::uniform(4)).unwrap();
        let neg = GridFn::constant(nodes.clone(), -1.0).unwrap();
        assert!(matches!(gronwall_envelope(&neg, 0.1, order), Err(Error::Precondition(_))));
        let w = GridFn::constant(nodes, 1.0).unwrap();
        assert!(matches!(gronwall_envelope(&w, 100.0, order), Err(Error::Divergence(_))));
    }
}
