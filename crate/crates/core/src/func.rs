//! Shared function handles for nonlinearities, sources and kernels.

use std::sync::Arc;

use crate::error::{Error, Result};

pub type Func1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Func2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

pub fn func1(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Func1 {
    Arc::new(f)
}

pub fn func2(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Func2 {
    Arc::new(f)
}

pub fn constant1(c: f64) -> Func1 {
    Arc::new(move |_| c)
}

pub fn constant2(c: f64) -> Func2 {
    Arc::new(move |_, _| c)
}

pub(crate) fn finite(value: f64, what: &str, at: impl FnOnce() -> String) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation(format!("{what} is {value} at {}", at())))
    }
}
