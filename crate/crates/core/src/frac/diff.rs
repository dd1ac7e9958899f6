//! Three-point first derivatives on nonuniform nodes.

/// Derivative estimate at node `i`. Interior nodes use the centred
/// nonuniform stencil, the two ends use one-sided three-point formulas.
/// With only two nodes the forward difference is returned.
pub fn derivative_at(nodes: &[f64], values: &[f64], i: usize) -> f64 {
    let n = nodes.len();
    debug_assert!(n >= 2 && i < n);
    if n == 2 {
        return (values[1] - values[0]) / (nodes[1] - nodes[0]);
    }
    if i == 0 {
        let (h1, h2) = (nodes[1] - nodes[0], nodes[2] - nodes[1]);
        -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * values[0] + (h1 + h2) / (h1 * h2) * values[1]
            - h1 / (h2 * (h1 + h2)) * values[2]
    } else if i == n - 1 {
        let (h1, h2) = (nodes[n - 2] - nodes[n - 3], nodes[n - 1] - nodes[n - 2]);
        h2 / (h1 * (h1 + h2)) * values[n - 3] - (h1 + h2) / (h1 * h2) * values[n - 2]
            + (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * values[n - 1]
    } else {
        let (h1, h2) = (nodes[i] - nodes[i - 1], nodes[i + 1] - nodes[i]);
        -h2 / (h1 * (h1 + h2)) * values[i - 1]
            + (h2 - h1) / (h1 * h2) * values[i]
            + h1 / (h2 * (h1 + h2)) * values[i + 1]
    }
}

pub fn derivative(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    (0..nodes.len()).map(|i| derivative_at(nodes, values, i)).collect()
}
