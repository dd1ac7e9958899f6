//! Product-integration weights for the kernel `(t - s)^{α-1}`.
//!
//! On each panel the regular factor is replaced by its linear interpolant and
//! the kernel is integrated exactly against the two hat functions. Moments are
//! closed form near the target; far from it (relative distance >= 4 panel
//! widths) a binomial series avoids the cancellation in `b^α - a^α`.

use crate::gamma::gamma;
use crate::grid::FracOrder;

const SERIES_RATIO: f64 = 4.0;
const SERIES_MAX_TERMS: usize = 80;

/// Kernel moments on one panel whose nearer end sits at distance `a >= 0`
/// from the target and whose width is `h > 0`.
///
/// Returns `(far, near)`: the weights multiplying the regular factor at the
/// panel end farther from the target and at the nearer end. Both are
/// nonnegative and sum to `∫_a^{a+h} r^{α-1} dr`.
pub fn panel_moments(alpha: f64, a: f64, h: f64) -> (f64, f64) {
    debug_assert!(a >= 0.0 && h > 0.0);
    if a == 0.0 {
        let ha = h.powf(alpha);
        return (ha / (alpha + 1.0), ha / (alpha * (alpha + 1.0)));
    }
    if a >= SERIES_RATIO * h {
        let rho = h / a;
        let mut binom = 1.0;
        let mut rho_k = 1.0;
        let mut far = 0.0;
        let mut near = 0.0;
        for k in 0..SERIES_MAX_TERMS {
            let kf = k as f64;
            let term = binom * rho_k;
            far += term / (kf + 2.0);
            near += term / ((kf + 1.0) * (kf + 2.0));
            if term.abs() < 1e-18 * far.abs() {
                break;
            }
            binom *= (alpha - 1.0 - kf) / (kf + 1.0);
            rho_k *= rho;
        }
        let scale = a.powf(alpha - 1.0) * h;
        return (scale * far, scale * near);
    }
    let b = a + h;
    // m0 = ∫ r^{α-1} dr, m1 = ∫ r^α dr over [a, b]
    let m0 = (b.powf(alpha) - a.powf(alpha)) / alpha;
    let m1 = (b.powf(alpha + 1.0) - a.powf(alpha + 1.0)) / (alpha + 1.0);
    ((m1 - a * m0) / h, (b * m0 - m1) / h)
}

/// Weights `w_j` with `∫_{x_0}^{target} (target - s)^{α-1} g(s) ds ≈ Σ_j w_j g(x_j)`.
///
/// `nodes` must be strictly increasing with the last node `<= target`. The
/// returned row has one entry per node; `scale` multiplies every entry.
pub fn kernel_row(nodes: &[f64], alpha: f64, target: f64, scale: f64) -> Vec<f64> {
    let mut row = vec![0.0; nodes.len()];
    accumulate_row(nodes, alpha, target, &mut row);
    for w in &mut row {
        *w *= scale;
    }
    row
}

fn accumulate_row(nodes: &[f64], alpha: f64, target: f64, row: &mut [f64]) {
    for j in 0..nodes.len().saturating_sub(1) {
        let (p, q) = (nodes[j], nodes[j + 1]);
        let (far, near) = panel_moments(alpha, target - q, q - p);
        row[j] += far;
        row[j + 1] += near;
    }
}

/// Lower-triangular product-integration matrix for the Riemann–Liouville
/// integral `I^α` on a fixed node set. Row `i` holds the weights for the
/// output node `t_i` over nodes `0..=i`, including the `1/Γ(α)` factor.
#[derive(Debug, Clone)]
pub struct ProductWeights {
    n: usize,
    alpha: f64,
    data: Vec<f64>,
}

impl ProductWeights {
    pub fn new(nodes: &[f64], order: FracOrder) -> Self {
        let alpha = order.value();
        let n = nodes.len();
        let inv_gamma = 1.0 / gamma(alpha);
        let mut data = vec![0.0; n * (n + 1) / 2];
        for i in 1..n {
            let row = &mut data[i * (i + 1) / 2..(i + 1) * (i + 2) / 2];
            accumulate_row(&nodes[..=i], alpha, nodes[i], row);
            for w in row.iter_mut() {
                *w *= inv_gamma;
            }
        }
        ProductWeights { n, alpha, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Weights for output node `i`, one per node `0..=i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * (i + 1) / 2..(i + 1) * (i + 2) / 2]
    }

    /// `Σ_j w_ij g_j`, summed in ascending `j`.
    pub fn apply_at(&self, i: usize, values: &[f64]) -> f64 {
        self.row(i).iter().zip(values).map(|(w, g)| w * g).sum()
    }

    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = (0..self.n).map(|i| self.apply_at(i, values)).collect();
        out[0] = 0.0;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite midpoint on the smooth substitute `x ↦ (a + x)^{α-1}` for a
    /// panel kept away from the singularity.
    fn brute_moments(alpha: f64, a: f64, h: f64) -> (f64, f64) {
        let m = 200_000;
        let dx = h / m as f64;
        let mut far = 0.0;
        let mut near = 0.0;
        for k in 0..m {
            let x = (k as f64 + 0.5) * dx;
            let kern = (a + x).powf(alpha - 1.0);
            far += kern * x * dx;
            near += kern * (h - x) * dx;
        }
        (far / h, near / h)
    }

    #[test]
    fn moments_match_brute_force_on_both_branches() {
        for &alpha in &[0.1, 0.5, 0.9] {
            for &a in &[0.3, 1.0, 3.9, 4.0, 10.0, 250.0] {
                let (far, near) = panel_moments(alpha, a, 1.0);
                let (bf, bn) = brute_moments(alpha, a, 1.0);
                assert!((far - bf).abs() < 1e-9 * bf, "alpha {alpha} a {a}: {far} vs {bf}");
                assert!((near - bn).abs() < 1e-9 * bn, "alpha {alpha} a {a}: {near} vs {bn}");
            }
        }
    }

    #[test]
    fn moments_sum_to_kernel_integral() {
        for &alpha in &[0.2, 0.7] {
            for &a in &[0.0, 0.5, 2.0, 8.0, 1e4] {
                let h = 0.25;
                let (far, near) = panel_moments(alpha, a, h);
                let exact = if a == 0.0 {
                    h.powf(alpha) / alpha
                } else {
                    a.powf(alpha) * (alpha * (h / a).ln_1p()).exp_m1() / alpha
                };
                assert!((far + near - exact).abs() < 1e-12 * exact);
            }
        }
    }

    #[test]
    fn branch_switch_is_continuous() {
        let alpha = 0.3;
        let h = 1e-3;
        let below = panel_moments(alpha, 4.0 * h * (1.0 - 1e-12), h);
        let above = panel_moments(alpha, 4.0 * h, h);
        assert!((below.0 - above.0).abs() < 1e-11 * above.0);
        assert!((below.1 - above.1).abs() < 1e-11 * above.1);
    }

    #[test]
    fn row_zero_is_empty_integral() {
        let nodes = [0.0, 0.5, 1.0];
        let w = ProductWeights::new(&nodes, FracOrder::new(0.5).unwrap());
        assert_eq!(w.row(0), &[0.0]);
        assert_eq!(w.apply(&[5.0, 5.0, 5.0])[0], 0.0);
    }
}
