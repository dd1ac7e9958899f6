//! The Riemann-Liouville thermistor problem
//! `u(t) = λ/(∫_0^T f(u) dx)² I^{2α} f(u)(t) + h(t)`:
//! threshold, a priori bound and the fixed point.
//!
//! ```text
//! cargo run --example rl_thermistor
//! ```

use fracsolve::func::func1;
use fracsolve::thermistor::{bound_rl, scan_weight, solve_rl, uniqueness_threshold_rl, Hypotheses, RlSpec};

fn main() -> fracsolve::error::Result<()> {
    // f(u) = 1 + 1/(1 + u²) lies in [1, 2] with Lipschitz constant 3√3/8 < 0.65.
    let f = func1(|u| 1.0 + 1.0 / (1.0 + u * u));
    let spec = RlSpec::new(0.25, 0.06, 1.0, f, Hypotheses::new(1.0, 2.0, 0.65));

    let threshold = uniqueness_threshold_rl(&spec)?;
    let (best_n, best) = scan_weight(&spec)?;
    println!("threshold at N = 1: {threshold:.6}; best over the scan: {best:.6} at N = {best_n}");
    println!("a priori bound: {:.6}", bound_rl(&spec)?);

    let (report, bounds) = solve_rl(&spec, 1e-12, 100)?;
    println!(
        "converged = {} after {} iterations, contraction {:.2e}",
        report.converged, report.iterations, report.contraction_factor
    );
    println!(
        "weighted norm {:.6} <= bound {:.6}: {:?}",
        bounds.realized,
        bounds.bound.unwrap_or(f64::NAN),
        bounds.satisfied
    );
    for k in (0..=report.solution.len() - 1).step_by(256) {
        println!("  u({:.4}) = {:.10}", report.solution.nodes()[k], report.solution.values()[k]);
    }
    Ok(())
}
