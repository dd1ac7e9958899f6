//! The linear test equation `u = 1 + λ I^α u`, whose solution is the
//! Mittag-Leffler function `E_α(λ t^α)`, solved by Picard iteration.
//!
//! ```text
//! cargo run --example mittag_leffler
//! ```

use fracsolve::func::func2;
use fracsolve::grid::{FracOrder, GridPolicy};
use fracsolve::oracle::mittag_leffler;
use fracsolve::volterra::{picard_solve, VolterraProblem};

fn main() -> fracsolve::error::Result<()> {
    for (alpha, lambda) in [(0.3, -1.0), (0.5, -1.0), (0.5, 1.0), (0.9, -2.0)] {
        let problem = VolterraProblem::new(
            FracOrder::new(alpha)?,
            1.0,
            func2(move |_, u| lambda * u),
            1.0,
            GridPolicy::graded(1024, 2.0),
        );
        let report = picard_solve(&problem, 1e-12, 300)?;
        let u1 = report.solution.last().1;
        let exact = mittag_leffler(alpha, lambda, 100)?.value;
        println!(
            "alpha = {alpha}, lambda = {lambda:>4}: u(1) = {u1:.10}, E = {exact:.10}, {} iterations",
            report.iterations
        );
    }
    Ok(())
}
