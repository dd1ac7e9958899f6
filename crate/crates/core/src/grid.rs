//! Tabulated functions and the grids they live on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fractional order in the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::domain(format!("fractional order {alpha} outside (0, 1)")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The complementary order 1 - α.
    pub fn complement(self) -> FracOrder {
        FracOrder(1.0 - self.0)
    }
}

/// Node placement `t_j = T (j/n)^γ`, j = 0..=n.
///
/// `n` counts panels, so a policy yields `n + 1` nodes. `gamma = 1` is the
/// uniform grid; larger values cluster nodes at the left end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPolicy {
    pub n: usize,
    pub gamma: f64,
}

impl GridPolicy {
    pub fn uniform(n: usize) -> Self {
        GridPolicy { n, gamma: 1.0 }
    }

    pub fn graded(n: usize, gamma: f64) -> Self {
        GridPolicy { n, gamma }
    }

    /// Default grading for thermistor problems of order 2α: γ = max(1, 1/(2α)).
    pub fn for_thermistor(n: usize, alpha: f64) -> Self {
        GridPolicy { n, gamma: (1.0 / (2.0 * alpha)).max(1.0) }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("grid needs n >= 2 panels, got {}", self.n)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 1.0) {
            return Err(Error::domain(format!("grading exponent {} must be >= 1", self.gamma)));
        }
        Ok(())
    }
}

/// Nodes on `[0, horizon]` following `policy`.
pub fn make_grid(horizon: f64, policy: GridPolicy) -> Result<Vec<f64>> {
    make_grid_on(0.0, horizon, policy)
}

/// Nodes on `[start, end]`, graded towards `start`.
pub fn make_grid_on(start: f64, end: f64, policy: GridPolicy) -> Result<Vec<f64>> {
    policy.validate()?;
    let len = end - start;
    if !(start.is_finite() && len.is_finite() && len > 0.0) {
        return Err(Error::domain(format!("grid interval [{start}, {end}] must have positive length")));
    }
    let n = policy.n;
    let mut nodes: Vec<f64> = (0..=n)
        .map(|j| start + len * (j as f64 / n as f64).powf(policy.gamma))
        .collect();
    nodes[n] = end;
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "grading exponent {} collapses nodes at n = {n}",
            policy.gamma
        )));
    }
    Ok(nodes)
}

pub(crate) fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 nodes, got {}", nodes.len())));
    }
    if let Some(bad) = nodes.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite node {bad}")));
    }
    if let Some(i) = nodes.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "nodes not strictly increasing at index {}: {} then {}",
            i + 1,
            nodes[i],
            nodes[i + 1]
        )));
    }
    Ok(())
}

/// A real function sampled on a strictly increasing node set.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl GridFn {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        if nodes.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite value {} at node t = {}",
                values[i], nodes[i]
            )));
        }
        Ok(GridFn { nodes, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(nodes: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = nodes.iter().map(|&t| f(t)).collect();
        GridFn::new(nodes, values)
    }

    pub fn constant(nodes: Vec<f64>, c: f64) -> Result<Self> {
        GridFn::from_fn(nodes, |_| c)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> (f64, f64) {
        (self.nodes[0], self.values[0])
    }

    pub fn last(&self) -> (f64, f64) {
        let n = self.len() - 1;
        (self.nodes[n], self.values[n])
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.nodes, self.values)
    }

    /// Same nodes, values transformed pointwise.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<GridFn> {
        let values = self.nodes.iter().zip(&self.values).map(|(&t, &v)| f(t, v)).collect();
        GridFn::new(self.nodes.clone(), values)
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.values)
    }

    /// `sup_t e^{-N t} |u(t)|`.
    pub fn weighted_norm(&self, weight: f64) -> f64 {
        weighted_sup(&self.nodes, &self.values, weight)
    }
}

pub fn sup_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn weighted_sup(nodes: &[f64], values: &[f64], weight: f64) -> f64 {
    nodes
        .iter()
        .zip(values)
        .fold(0.0, |m, (t, v)| m.max((-weight * t).exp() * v.abs()))
}

/// Composite trapezoid rule over the stored nodes.
pub fn trapezoid(nodes: &[f64], values: &[f64]) -> f64 {
    nodes
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Running trapezoid integrals: `out[i] = ∫_{t_0}^{t_i}`.
pub fn trapezoid_prefix(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(nodes.len());
    let mut acc = 0.0;
    out.push(acc);
    for (t, v) in nodes.windows(2).zip(values.windows(2)) {
        acc += 0.5 * (t[1] - t[0]) * (v[0] + v[1]);
        out.push(acc);
    }
    out
}
