//! Delta calculus on time scales built from finitely many closed intervals
//! and isolated points.
//!
//! A time scale is stored as ordered disjoint segments `[a_i, b_i]`; a
//! degenerate segment `a_i = b_i` is an isolated point. The forward jump of
//! the right end of a segment is the left end of the next one.

mod calculus;
mod grid;

pub use calculus::{
    delta_integral, extension_bound_check, ts_frac_derivative, ts_frac_integral, ExtensionBound,
    TsWeights,
};
pub use grid::{TsGrid, TsGridFn};
pub(crate) use calculus::delta_integral_between;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct TimeScale {
    segments: Vec<(f64, f64)>,
}

impl TryFrom<Vec<[f64; 2]>> for TimeScale {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        TimeScale::new(pairs.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<TimeScale> for Vec<[f64; 2]> {
    fn from(ts: TimeScale) -> Self {
        ts.segments.into_iter().map(|(a, b)| [a, b]).collect()
    }
}

impl TimeScale {
    pub fn new(segments: Vec<(f64, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::domain("time scale needs at least one segment"));
        }
        for (i, &(a, b)) in segments.iter().enumerate() {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::domain(format!("segment {i} has a non-finite endpoint")));
            }
            if a > b {
                return Err(Error::domain(format!("segment {i} = [{a}, {b}] is reversed")));
            }
        }
        if let Some(i) = segments.windows(2).position(|w| w[0].1 >= w[1].0) {
            return Err(Error::domain(format!(
                "segments {i} and {} overlap or touch; merge them",
                i + 1
            )));
        }
        Ok(TimeScale { segments })
    }

    /// The real interval `[a, b]`.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        TimeScale::new(vec![(a, b)])
    }

    /// A finite set of isolated points (sorted internally).
    pub fn points(points: &[f64]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort_by(f64::total_cmp);
        TimeScale::new(pts.into_iter().map(|p| (p, p)).collect())
    }

    /// `{start, start + h, ..., start + k h}` with `k` steps.
    pub fn lattice(start: f64, h: f64, steps: usize) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::domain(format!("lattice step {h} must be positive")));
        }
        let pts: Vec<f64> = (0..=steps).map(|k| start + h * k as f64).collect();
        TimeScale::points(&pts)
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    pub fn min(&self) -> f64 {
        self.segments[0].0
    }

    pub fn max(&self) -> f64 {
        self.segments[self.segments.len() - 1].1
    }

    pub fn segment_of(&self, t: f64) -> Option<usize> {
        let k = self.segments.partition_point(|&(_, b)| b < t);
        match self.segments.get(k) {
            Some(&(a, _)) if a <= t => Some(k),
            _ => None,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.segment_of(t).is_some()
    }

    /// Forward jump `σ(t) = inf{s ∈ T : s > t}`, with `σ(max T) = max T`.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let k = self
            .segment_of(t)
            .ok_or_else(|| Error::domain(format!("{t} is not in the time scale")))?;
        let (_, b) = self.segments[k];
        if t < b {
            Ok(t)
        } else {
            Ok(self.segments.get(k + 1).map_or(t, |&(a, _)| a))
        }
    }

    /// Graininess `μ(t) = σ(t) - t`.
    pub fn mu(&self, t: f64) -> Result<f64> {
        Ok(self.sigma(t)? - t)
    }

    pub fn is_right_scattered(&self, t: f64) -> Result<bool> {
        Ok(self.sigma(t)? > t)
    }

    /// True when no nondegenerate interval meets `(-∞, t)`.
    pub fn is_discrete_below(&self, t: f64) -> bool {
        self.segments.iter().take_while(|&&(a, _)| a < t).all(|&(a, b)| a == b)
    }

    pub fn is_discrete(&self) -> bool {
        self.segments.iter().all(|&(a, b)| a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        let unit = TimeScale::interval(0.0, 1.0).unwrap();
        assert_eq!(unit.sigma(0.3).unwrap(), 0.3);
        assert_eq!(unit.sigma(1.0).unwrap(), 1.0);

        let pts = TimeScale::points(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(pts.sigma(0.5).unwrap(), 1.0);
        assert_eq!(pts.mu(0.0).unwrap(), 0.5);

        let mixed = TimeScale::new(vec![(0.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(mixed.sigma(1.0).unwrap(), 2.0);
        assert!(mixed.is_right_scattered(1.0).unwrap());
        assert!(!mixed.is_right_scattered(0.5).unwrap());
    }

    #[test]
    fn sigma_outside_is_domain_error() {
        let mixed = TimeScale::new(vec![(0.0, 1.0), (2.0, 2.0)]).unwrap();
        assert!(matches!(mixed.sigma(1.5), Err(Error::Domain(_))));
        assert!(matches!(mixed.sigma(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn validation() {
        assert!(TimeScale::new(vec![]).is_err());
        assert!(TimeScale::new(vec![(1.0, 0.0)]).is_err());
        assert!(TimeScale::new(vec![(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(TimeScale::new(vec![(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn json_is_array_of_pairs() {
        let ts: TimeScale = serde_json::from_str("[[0.0,0.5],[1.0,1.0]]").unwrap();
        assert_eq!(ts.segments(), &[(0.0, 0.5), (1.0, 1.0)]);
        assert_eq!(serde_json::to_string(&ts).unwrap(), "[[0.0,0.5],[1.0,1.0]]");
        assert!(serde_json::from_str::<TimeScale>("[[1.0,0.0]]").is_err());
    }

    #[test]
    fn discreteness() {
        let mixed = TimeScale::new(vec![(0.0, 0.0), (0.5, 0.5), (1.0, 2.0)]).unwrap();
        assert!(mixed.is_discrete_below(1.0));
        assert!(!mixed.is_discrete_below(1.5));
        assert!(!mixed.is_discrete());
    }
}
