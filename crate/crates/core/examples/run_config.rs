//! Running a JSON configuration through the library, as `fracsolve run`
//! does, and reading the report.
//!
//! ```text
//! cargo run --example run_config -- crates/core/examples/configs/rl_sigmoid.json
//! ```

use fracsolve::cli::{execute, RunConfig};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/rl_sigmoid.json").into());
    let text = std::fs::read_to_string(&path).expect("readable config");
    let config = RunConfig::from_json(&text).expect("valid config");
    let outcome = execute(&config);
    println!("{}", serde_json::to_string_pretty(&outcome.report).expect("report serializes"));
    if let Some(u) = outcome.solution {
        let (t, v) = u.last();
        println!("u({t}) = {v}");
    }
    println!("exit code {}", outcome.exit_code);
}
