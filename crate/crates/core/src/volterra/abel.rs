//! Abel integral equations.
//!
//! Second kind, general bounded kernel:
//! `f(x) = ∫_0^x k(x, s) g(s) (x - s)^{-α} ds + g(x)`, solved by Picard
//! iteration. First kind with the convolution kernel `1/Γ(1-α)`, i.e.
//! `f = I^{1-α} g`, inverted analytically as `g = D^{1-α} f`.

use super::iteration::{iterate, IterationControl, SolveReport};
use crate::error::{Error, Result};
use crate::frac::{kernel_row, rl_derivative};
use crate::func::{finite, Func2};
use crate::grid::{sup_norm, FracOrder, GridFn};

/// Relative slack allowed on `f(0) = 0` before the first-kind problem is
/// declared inconsistent.
pub const FIRST_KIND_ORIGIN_SLACK: f64 = 1e-10;

/// Solves the second-kind Abel equation for `g` on the nodes of `f`.
///
/// `kernel` is evaluated as `k(x, s)`. The iteration starts from `g = f`.
pub fn abel_second_kind(
    f: &GridFn,
    kernel: &Func2,
    order: FracOrder,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    let nodes = f.nodes();
    let beta = 1.0 - order.value();
    // rows[i][j] = product weight of (x_i - s)^{-α} times k(x_i, s_j)
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(nodes.len());
    for (i, &x) in nodes.iter().enumerate() {
        let mut row = kernel_row(&nodes[..=i], beta, x, 1.0);
        for (j, w) in row.iter_mut().enumerate() {
            let s = nodes[j];
            let k = finite(kernel(x, s), "kernel", || format!("x = {x}, s = {s}"))?;
            *w *= k;
        }
        rows.push(row);
    }
    let control = IterationControl::new(tol, max_iter);
    let source = f.values();
    iterate(nodes, source.to_vec(), &control, |g| {
        Ok(rows
            .iter()
            .zip(source)
            .map(|(row, fi)| fi - row.iter().zip(g).map(|(w, gj)| w * gj).sum::<f64>())
            .collect())
    })
}

/// Inverts `f = I^{1-α} g` for `g`.
pub fn abel_first_kind_convolution(f: &GridFn, order: FracOrder) -> Result<GridFn> {
    let f0 = f.values()[0];
    let scale = sup_norm(f.values()).max(1.0);
    if f0.abs() > FIRST_KIND_ORIGIN_SLACK * scale {
        return Err(Error::Consistency(format!(
            "f(0) = {f0} but a fractional integral vanishes at the origin"
        )));
    }
    rl_derivative(f, order.complement())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{constant2, func2};
    use crate::gamma::gamma;
    use crate::grid::{make_grid, GridPolicy};

    fn nodes(n: usize) -> Vec<f64> {
        make_grid(1.0, GridPolicy::graded(n, 2.0)).unwrap()
    }

    fn rel_sup(a: &[f64], b: &[f64]) -> f64 {
        crate::grid::sup_diff(a, b) / sup_norm(b)
    }

    #[test]
    fn zero_kernel_returns_source() {
        let f = GridFn::from_fn(nodes(32), |x| x.cos()).unwrap();
        let r = abel_second_kind(&f, &constant2(0.0), FracOrder::new(0.5).unwrap(), 1e-12, 10).unwrap();
        assert_eq!(r.solution.values(), f.values());
    }

    #[test]
    fn second_kind_manufactured_linear() {
        let a = 0.3;
        // f = g + I^{1-α} g with g(s) = s
        let f = GridFn::from_fn(nodes(1024), |x| x + x.powf(2.0 - a) / gamma(3.0 - a)).unwrap();
        let k = constant2(1.0 / gamma(1.0 - a));
        let r = abel_second_kind(&f, &k, FracOrder::new(a).unwrap(), 1e-12, 200).unwrap();
        assert!(r.converged);
        let exact: Vec<f64> = f.nodes().to_vec();
        assert!(rel_sup(r.solution.values(), &exact) < 1e-3);
    }

    #[test]
    fn second_kind_product_kernel() {
        // k = x s, g = 1, α = 1/2: f = 1 + x ∫_0^x s (x-s)^{-1/2} ds = 1 + (4/3) x^{5/2}
        let f = GridFn::from_fn(nodes(1024), |x| 1.0 + 4.0 / 3.0 * x.powf(2.5)).unwrap();
        let k = func2(|x, s| x * s);
        let r = abel_second_kind(&f, &k, FracOrder::new(0.5).unwrap(), 1e-12, 200).unwrap();
        assert!(r.converged);
        assert!(r.solution.values().iter().all(|g| (g - 1.0).abs() < 1e-3));
    }

    #[test]
    fn first_kind_examples() {
        let a = 0.4;
        let order = FracOrder::new(a).unwrap();
        let f = GridFn::from_fn(nodes(512), |x| x.powf(1.0 - a) / gamma(2.0 - a)).unwrap();
        let g = abel_first_kind_convolution(&f, order).unwrap();
        assert!(g.values().iter().all(|v| (v - 1.0).abs() < 1e-3), "{:?}", &g.values()[..4]);

        let zero = GridFn::constant(nodes(16), 0.0).unwrap();
        let g = abel_first_kind_convolution(&zero, order).unwrap();
        assert!(g.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn first_kind_rejects_nonzero_origin() {
        let f = GridFn::from_fn(nodes(16), |x| 1.0 + x).unwrap();
        let err = abel_first_kind_convolution(&f, FracOrder::new(0.5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)));
    }
}
