//! Delta calculus and the thermistor problem on a time scale mixing an
//! interval with isolated points.
//!
//! ```text
//! cargo run --example time_scale
//! ```

use fracsolve::func::func1;
use fracsolve::grid::{FracOrder, GridPolicy};
use fracsolve::oracle::discrete_ts_sum;
use fracsolve::thermistor::{solve_ts, uniqueness_threshold_ts, Hypotheses, TsSpec};
use fracsolve::timescale::{delta_integral, ts_frac_integral, TimeScale, TsGrid, TsGridFn};

fn main() -> fracsolve::error::Result<()> {
    let mixed = TimeScale::new(vec![(0.0, 0.5), (0.75, 0.75), (1.0, 1.0)])?;
    println!("sigma(0.5) = {}, mu(0.5) = {}", mixed.sigma(0.5)?, mixed.mu(0.5)?);
    let g = TsGridFn::from_fn(TsGrid::new(mixed.clone(), GridPolicy::uniform(64))?, |t| t)?;
    println!("delta integral of t over [0, 1] = {}", delta_integral(&g, 0.0, 1.0)?);

    let order = FracOrder::new(0.5)?;
    let lattice = TimeScale::lattice(0.0, 0.25, 4)?;
    let h = TsGridFn::from_fn(TsGrid::new(lattice.clone(), GridPolicy::uniform(4))?, |_| 1.0)?;
    println!(
        "I^0.5 1 at t = 1 on 0.25 Z: {:.15} (explicit sum {:.15})",
        ts_frac_integral(&h, order, 0.0, 1.0)?,
        discrete_ts_sum(&lattice, |_| 1.0, order, 1.0)?.value
    );

    let f = func1(|u| 1.0 + 1.0 / (1.0 + u * u));
    let spec = TsSpec::new(0.25, 0.1, mixed, f, Hypotheses::new(1.0, 2.0, 0.65));
    println!("uniqueness threshold: {:.6}", uniqueness_threshold_ts(&spec)?);
    let (report, bounds) = solve_ts(&spec, 1e-12, 100)?;
    println!("converged after {} iterations, sup norm {:.8}", report.iterations, bounds.realized);
    for (t, u) in report.solution.nodes().iter().zip(report.solution.values()).rev().take(3) {
        println!("  u({t}) = {u:.10}");
    }
    Ok(())
}
