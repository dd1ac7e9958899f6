//! Fixed-point solvers for fractional integro-differential equations of
//! thermistor type.
//!
//! Every problem is reduced to a weakly singular Volterra equation of the
//! second kind, discretized by product integration on a (graded) grid and
//! solved by Picard iteration with divergence detection.
//!
//! - [`frac`]: Riemann-Liouville integral and derivative, Caputo derivative.
//! - [`volterra`]: the Picard engine and the Abel equations.
//! - [`thermistor`]: Riemann-Liouville, Caputo (with continuation) and
//!   time-scale thermistor problems, thresholds, bounds, Gronwall envelopes.
//! - [`timescale`]: time scales, delta integrals and fractional operators on them.
//! - [`oracle`]: independent reference values used by the tests and `verify`.
//! - [`expr`]: the expression language of the JSON configs.
//! - [`cli`]: the `fracsolve` command line, also usable as a library.
//!
//! The `examples/` directory has one runnable program per capability.

// `!(x >= floor)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod expr;
pub mod frac;
pub mod func;
pub mod gamma;
pub mod grid;
pub mod oracle;
pub mod thermistor;
pub mod timescale;
pub mod volterra;

pub use error::{Error, Result};
pub use grid::{FracOrder, GridFn, GridPolicy};
