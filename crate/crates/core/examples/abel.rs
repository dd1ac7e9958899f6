//! Abel integral equations of the first and second kind.
//!
//! ```text
//! cargo run --example abel
//! ```

use fracsolve::func::func2;
use fracsolve::gamma::gamma;
use fracsolve::grid::{make_grid, FracOrder, GridFn, GridPolicy};
use fracsolve::volterra::{abel_first_kind_convolution, abel_second_kind};

fn main() -> fracsolve::error::Result<()> {
    let alpha = FracOrder::new(0.4)?;
    let nodes = make_grid(1.0, GridPolicy::graded(2048, 2.0))?;

    // First kind: f = I^{1-a} g with g(x) = x.
    let f = GridFn::from_fn(nodes.clone(), |x| x.powf(1.6) / gamma(2.6))?;
    let g = abel_first_kind_convolution(&f, alpha)?;
    let (x, gx) = g.last();
    println!("first kind:  g({x}) = {gx:.8} (exact 1)");

    // Second kind with kernel k(x, s) = x - s and exact solution g = cos.
    // f is built from the solution by brute force, then the equation is solved back.
    let k = func2(|x, s| x - s);
    let f = GridFn::from_fn(nodes, |x| {
        let n = 20_000;
        let h = x / n as f64;
        let integral: f64 = (0..n)
            .map(|j| {
                let s = (j as f64 + 0.5) * h;
                (x - s).powf(1.0 - 0.4) * s.cos()
            })
            .sum::<f64>()
            * h;
        x.cos() + integral
    })?;
    let report = abel_second_kind(&f, &k, alpha, 1e-12, 200)?;
    let err = report
        .solution
        .nodes()
        .iter()
        .zip(report.solution.values())
        .map(|(x, g)| (g - x.cos()).abs())
        .fold(0.0, f64::max);
    println!(
        "second kind: {} iterations, contraction {:.3}, max |g - cos| = {err:.2e}",
        report.iterations, report.contraction_factor
    );
    Ok(())
}
