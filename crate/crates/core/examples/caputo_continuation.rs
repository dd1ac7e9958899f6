//! Local Caputo thermistor solve followed by continuation windows.
//!
//! ```text
//! cargo run --example caputo_continuation
//! ```

use fracsolve::func::func2;
use fracsolve::grid::GridPolicy;
use fracsolve::thermistor::{caputo_local_radius, continue_caputo, solve_caputo_local, CaputoSpec, Hypotheses};

fn main() -> fracsolve::error::Result<()> {
    let f = func2(|_, u| 1.0 + (-u * u).exp());
    let mut spec = CaputoSpec::new(0.25, 1.0, 1.0, f, Hypotheses::new(1.0, 2.0, 1.0));
    spec.horizon = 3.0;
    spec.grid = GridPolicy::uniform(128);

    let h = caputo_local_radius(&spec)?;
    println!("local existence radius h = {h:.6}");
    let mut report = solve_caputo_local(&spec, 1e-11, 100)?;
    println!("window 0: [0, {:.4}], {} iterations", report.solution.last().0, report.iterations);
    let mut window = 1;
    while report.solution.last().0 < spec.horizon {
        let start = report.solution.last().0;
        report = continue_caputo(&report, &spec, 1e-11, 100)?;
        println!(
            "window {window}: [{start:.4}, {:.4}], {} iterations",
            report.solution.last().0,
            report.iterations
        );
        window += 1;
    }
    let (t, u) = report.solution.last();
    println!("u({t:.4}) = {u:.10}");
    Ok(())
}
