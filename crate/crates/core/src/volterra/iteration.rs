//! Picard iteration driver shared by every solver in the crate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{sup_norm, GridFn};

/// Number of consecutive growing sweeps that counts as divergence.
pub const DIVERGENCE_STREAK: usize = 5;

/// Norm used for the stopping rule and the diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Norm {
    #[default]
    Sup,
    /// `sup_t e^{-N t} |x(t)|`
    Weighted(f64),
}

impl Norm {
    pub fn of_diff(self, nodes: &[f64], a: &[f64], b: &[f64]) -> f64 {
        match self {
            Norm::Sup => a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs())),
            Norm::Weighted(w) => nodes
                .iter()
                .zip(a.iter().zip(b))
                .fold(0.0, |m, (t, (x, y))| m.max((-w * t).exp() * (x - y).abs())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationControl {
    pub tol: f64,
    pub max_iter: usize,
    pub norm: Norm,
}

impl IterationControl {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        IterationControl { tol, max_iter, norm: Norm::Sup }
    }

    pub fn with_norm(mut self, norm: Norm) -> Self {
        self.norm = norm;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Precondition(format!("tolerance {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Precondition("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of a fixed-point solve.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub solution: GridFn,
    /// Operator applications performed (the residual check is not counted).
    pub iterations: usize,
    /// `‖u_{k+1} - u_k‖` for each sweep.
    pub differences: Vec<f64>,
    /// Geometric mean of consecutive difference ratios.
    pub contraction_factor: f64,
    /// `‖u - A u‖` for the returned iterate.
    pub residual: f64,
    pub converged: bool,
    pub warnings: Vec<String>,
    /// Asserted hypotheses that the computed iterates contradict.
    pub hypothesis_violations: Vec<String>,
}

impl SolveReport {
    pub fn final_difference(&self) -> Option<f64> {
        self.differences.last().copied()
    }
}

fn contraction_factor(diffs: &[f64], scale: f64) -> f64 {
    let floor = 64.0 * f64::EPSILON * scale.max(1.0);
    let mut log_sum = 0.0;
    let mut count = 0usize;
    for w in diffs.windows(2) {
        if w[0] <= floor {
            continue;
        }
        if w[1] == 0.0 {
            return 0.0;
        }
        log_sum += (w[1] / w[0]).ln();
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        (log_sum / count as f64).exp()
    }
}

/// Iterates `u ↦ op(u)` from `initial` until the step falls below the
/// tolerance, the sweep budget is spent, or the steps grow
/// [`DIVERGENCE_STREAK`] times in a row.
pub fn iterate<F>(
    nodes: &[f64],
    initial: Vec<f64>,
    control: &IterationControl,
    mut op: F,
) -> Result<SolveReport>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    control.validate()?;
    let norm = control.norm;
    let mut u = initial;
    let mut diffs: Vec<f64> = Vec::new();
    let mut growth = 0usize;
    let mut converged = false;

    let report = |u: Vec<f64>, diffs: Vec<f64>, residual: f64, converged: bool| -> Result<SolveReport> {
        let scale = sup_norm(&u);
        Ok(SolveReport {
            solution: GridFn::new(nodes.to_vec(), u)?,
            iterations: diffs.len(),
            contraction_factor: contraction_factor(&diffs, scale),
            differences: diffs,
            residual,
            converged,
            warnings: Vec::new(),
            hypothesis_violations: Vec::new(),
        })
    };

    for _ in 0..control.max_iter {
        let next = op(&u)?;
        if next.iter().any(|v| !v.is_finite()) {
            let last = diffs.last().copied().unwrap_or(f64::MAX);
            diffs.push(f64::MAX);
            return Err(Error::Divergence(Box::new(report(u, diffs, last, false)?)));
        }
        let d = norm.of_diff(nodes, &next, &u);
        if let Some(&prev) = diffs.last() {
            growth = if d > prev { growth + 1 } else { 0 };
        }
        diffs.push(d);
        u = next;
        if d <= control.tol {
            converged = true;
            break;
        }
        if growth >= DIVERGENCE_STREAK {
            return Err(Error::Divergence(Box::new(report(u, diffs, d, false)?)));
        }
    }

    let check = op(&u)?;
    let residual = norm.of_diff(nodes, &check, &u);
    let residual = if residual.is_finite() { residual } else { f64::MAX };
    report(u, diffs, residual, converged)
}
