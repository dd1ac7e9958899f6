//! The fractional Gronwall envelope `v = w + a ∫ v(s)(t-s)^{-α} ds`
//! against its Mittag-Leffler closed form for constant `w`.
//!
//! ```text
//! cargo run --example gronwall
//! ```

use fracsolve::gamma::gamma;
use fracsolve::grid::{make_grid, FracOrder, GridFn, GridPolicy};
use fracsolve::oracle::mittag_leffler;
use fracsolve::thermistor::gronwall_envelope;

fn main() -> fracsolve::error::Result<()> {
    let (a, alpha) = (0.1, 0.5);
    let nodes = make_grid(1.0, GridPolicy::uniform(1024))?;
    let w = GridFn::constant(nodes, 1.0)?;
    let v = gronwall_envelope(&w, a, FracOrder::new(alpha)?)?;
    for k in [256, 512, 1024] {
        let t = v.nodes()[k];
        let beta = 1.0 - alpha;
        let exact = mittag_leffler(beta, a * gamma(beta) * t.powf(beta), 100)?.value;
        println!("v({t:.2}) = {:.8}, closed form {exact:.8}", v.values()[k]);
    }
    Ok(())
}
