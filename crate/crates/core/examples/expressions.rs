//! The expression language used in JSON configs.
//!
//! ```text
//! cargo run --example expressions
//! ```

use fracsolve::expr::{parse_expr, parse_in, Bindings, Var};

fn main() {
    let e = parse_expr("1 + 1/(1 + exp(-u))").expect("valid expression");
    for u in [-2.0, 0.0, 2.0] {
        println!("{e} at u = {u}: {}", e.value(&Bindings::default().with(Var::U, u)));
    }
    let k = parse_in("x - s", &[Var::X, Var::S]).expect("valid kernel");
    let k = k.func2(Var::X, Var::S);
    println!("k(1, 0.25) = {}", k(1.0, 0.25));

    // Right-associative power, unary minus binds looser than ^.
    println!("2^3^2 = {}, -2^2 = {}", parse_expr("2^3^2").unwrap().value(&Bindings::default()), parse_expr("-2^2").unwrap().value(&Bindings::default()));

    for bad in ["1 +", "sin(u", "t * y", "exp(1, 2)"] {
        match parse_in(bad, &[Var::T, Var::U]) {
            Ok(_) => println!("{bad:?} parsed"),
            Err(err) => println!("{bad:?}: {err}"),
        }
    }
}
