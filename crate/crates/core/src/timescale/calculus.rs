use super::grid::{TsGrid, TsGridFn};
use crate::error::{Error, Result};
use crate::frac::{diff, panel_moments, rl_derivative};
use crate::gamma::gamma;
use crate::grid::{FracOrder, GridFn};

/// `∫_a^b g Δt`: trapezoid over real panels plus `g(t) μ(t)` for every
/// right-scattered node in `[a, b)`. Both ends must be sample nodes.
pub fn delta_integral(g: &TsGridFn, a: f64, b: f64) -> Result<f64> {
    let grid = g.grid();
    let (ia, ib) = ordered_indices(grid, a, b)?;
    Ok(delta_integral_between(grid, g.values(), ia, ib))
}

pub(crate) fn delta_integral_between(grid: &TsGrid, values: &[f64], ia: usize, ib: usize) -> f64 {
    let t = grid.nodes();
    let mut acc = 0.0;
    for j in ia..ib {
        if grid.is_continuous_panel(j) {
            acc += 0.5 * (t[j + 1] - t[j]) * (values[j] + values[j + 1]);
        } else {
            acc += values[j] * (t[j + 1] - t[j]);
        }
    }
    acc
}

fn ordered_indices(grid: &TsGrid, a: f64, b: f64) -> Result<(usize, usize)> {
    if a > b {
        return Err(Error::domain(format!("integration bounds reversed: {a} > {b}")));
    }
    Ok((grid.index_of(a)?, grid.index_of(b)?))
}

/// Raw kernel weights (no `1/Γ(α)`) for `∫_{t_start}^{t_target} (t - s)^{α-1} g(s) Δs`,
/// one entry per node `start..=target`.
fn weight_row(grid: &TsGrid, alpha: f64, start: usize, target: usize) -> Vec<f64> {
    let t = grid.nodes();
    let tt = t[target];
    let mut row = vec![0.0; target - start + 1];
    for j in start..target {
        let k = j - start;
        if grid.is_continuous_panel(j) {
            let (far, near) = panel_moments(alpha, tt - t[j + 1], t[j + 1] - t[j]);
            row[k] += far;
            row[k + 1] += near;
        } else {
            row[k] += (tt - t[j]).powf(alpha - 1.0) * (t[j + 1] - t[j]);
        }
    }
    row
}

fn weighted_sum(row: &[f64], values: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (w, g) in row.iter().zip(values) {
        acc += w * g;
    }
    acc
}

/// Fractional delta integral `(1/Γ(α)) ∫_start^t (t - s)^{α-1} g(s) Δs`.
///
/// Real panels use product integration; a right-scattered `s < t`
/// contributes `(t - s)^{α-1} μ(s) g(s)` directly.
pub fn ts_frac_integral(g: &TsGridFn, order: FracOrder, start: f64, t: f64) -> Result<f64> {
    let grid = g.grid();
    let (is, it) = ordered_indices(grid, start, t)?;
    let alpha = order.value();
    let row = weight_row(grid, alpha, is, it);
    Ok(weighted_sum(&row, &g.values()[is..=it]) / gamma(alpha))
}

/// Delta derivative of `τ ↦ ts_frac_integral(g, 1 - α, start, τ)` at `t`.
///
/// At a right-scattered `t` this is the forward difference quotient over
/// `[t, σ(t)]`. At a right-dense `t` whose interval reaches back to `start`
/// it is the real Riemann–Liouville derivative on that interval; otherwise
/// the three-point stencil over the interval's nodes.
pub fn ts_frac_derivative(g: &TsGridFn, order: FracOrder, start: f64, t: f64) -> Result<f64> {
    let grid = g.grid();
    let (is, it) = ordered_indices(grid, start, t)?;
    let comp = order.complement();
    let integral_at = |i: usize| -> f64 {
        let row = weight_row(grid, comp.value(), is, i);
        weighted_sum(&row, &g.values()[is..=i]) / gamma(comp.value())
    };
    let nodes = grid.nodes();
    if grid.is_right_scattered(it) {
        let mu = nodes[it + 1] - nodes[it];
        return Ok((integral_at(it + 1) - integral_at(it)) / mu);
    }
    let (lo, hi) = grid.segment_range(it);
    if lo <= is {
        if hi == is {
            return Err(Error::domain(format!("no neighbours to differentiate at {t}")));
        }
        let local = GridFn::new(nodes[is..=hi].to_vec(), g.values()[is..=hi].to_vec())?;
        return Ok(rl_derivative(&local, order)?.values()[it - is]);
    }
    if hi == lo {
        return Err(Error::domain(format!("isolated maximum {t} has no delta derivative")));
    }
    let local_f: Vec<f64> = (lo..=hi).map(integral_at).collect();
    Ok(diff::derivative_at(&nodes[lo..=hi], &local_f, it - lo))
}

/// Precomputed fractional delta-integral weights from the first node to
/// every node, for repeated application inside a fixed-point solve.
#[derive(Debug, Clone)]
pub struct TsWeights {
    rows: Vec<Vec<f64>>,
    inv_gamma: f64,
}

impl TsWeights {
    pub fn new(grid: &TsGrid, order: FracOrder) -> Self {
        let alpha = order.value();
        let rows = (0..grid.len()).map(|i| weight_row(grid, alpha, 0, i)).collect();
        TsWeights { rows, inv_gamma: 1.0 / gamma(alpha) }
    }

    pub fn apply_at(&self, i: usize, values: &[f64]) -> f64 {
        weighted_sum(&self.rows[i], values) * self.inv_gamma
    }

    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        (0..self.rows.len()).map(|i| self.apply_at(i, values)).collect()
    }
}

/// Both sides of `∫_a^b g Δt <= ∫_a^b G(t) dt`, where `G` extends `g`
/// to the real line by holding `g(t)` constant on each gap `(t, σ(t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn extension_bound_check(g: &TsGridFn, a: f64, b: f64) -> Result<ExtensionBound> {
    let grid = g.grid();
    let (ia, ib) = ordered_indices(grid, a, b)?;
    let v = g.values();
    if let Some(j) = (ia..ib).find(|&j| v[j + 1] < v[j]) {
        return Err(Error::Precondition(format!(
            "g decreases between t = {} and t = {}",
            grid.nodes()[j],
            grid.nodes()[j + 1]
        )));
    }
    let lhs = delta_integral_between(grid, v, ia, ib);
    // Real integral of the extension, panel by panel over [a, b].
    let t = grid.nodes();
    let mut rhs = 0.0;
    for j in ia..ib {
        let width = t[j + 1] - t[j];
        rhs += if grid.is_continuous_panel(j) {
            0.5 * width * (v[j] + v[j + 1])
        } else {
            v[j] * width
        };
    }
    let slack = 1e-12 * rhs.abs().max(1.0);
    Ok(ExtensionBound { lhs, rhs, holds: lhs <= rhs + slack })
}
