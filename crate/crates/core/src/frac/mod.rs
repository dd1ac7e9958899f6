//! Riemann–Liouville and Caputo operators on real intervals.
//!
//! The lower terminal is the first node of the grid. Integrals use product
//! integration ([`ProductWeights`]); derivatives differentiate the integral of
//! complementary order with a three-point nonuniform stencil, so the singular
//! kernel is never differentiated directly.

pub mod diff;
pub mod weights;

pub use weights::{kernel_row, panel_moments, ProductWeights};

use crate::error::Result;
use crate::gamma::gamma;
use crate::grid::{FracOrder, GridFn};

/// `I^α g` sampled on the nodes of `g`. The value at the first node is 0.
pub fn rl_integral(g: &GridFn, order: FracOrder) -> Result<GridFn> {
    let weights = ProductWeights::new(g.nodes(), order);
    GridFn::new(g.nodes().to_vec(), weights.apply(g.values()))
}

/// `D^α g = d/dt I^{1-α} g`.
///
/// The terms `g(t_0)` and `c (t - t_0)^α` (with `c` fixed by the first panel)
/// are differentiated in closed form and only the remainder goes through
/// the integral and the three-point stencil. Linear interpolation cannot
/// resolve `t^α` on the first panels at any resolution, and functions in the
/// range of `I^α` start exactly like that.
///
/// When `g(t_0) != 0` the derivative is unbounded at `t_0`; the first entry
/// then holds only the finite part.
pub fn rl_derivative(g: &GridFn, order: FracOrder) -> Result<GridFn> {
    let alpha = order.value();
    let nodes = g.nodes();
    let values = g.values();
    let t0 = nodes[0];
    let g0 = values[0];
    let c = (values[1] - g0) / (nodes[1] - t0).powf(alpha);
    let remainder: Vec<f64> = nodes
        .iter()
        .zip(values)
        .map(|(t, v)| v - g0 - c * (t - t0).powf(alpha))
        .collect();
    let weights = ProductWeights::new(nodes, order.complement());
    let integral = weights.apply(&remainder);
    let mut out = diff::derivative(nodes, &integral);
    let power_part = c * gamma(1.0 + alpha);
    let const_part = g0 / gamma(1.0 - alpha);
    out[0] += power_part;
    for (d, t) in out.iter_mut().zip(nodes).skip(1) {
        *d += power_part + const_part * (t - t0).powf(-alpha);
    }
    GridFn::new(nodes.to_vec(), out)
}

/// Caputo derivative: the Riemann–Liouville derivative of `g - g(t_0)`.
pub fn caputo_derivative(g: &GridFn, order: FracOrder) -> Result<GridFn> {
    let g0 = g.values()[0];
    rl_derivative(&g.map(|_, v| v - g0)?, order)
}
