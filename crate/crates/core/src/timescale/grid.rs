use super::TimeScale;
use crate::error::{Error, Result};
use crate::grid::{make_grid_on, GridPolicy};

/// Sample nodes on a time scale: every isolated point, plus a graded grid
/// inside each nondegenerate interval.
#[derive(Debug, Clone, PartialEq)]
pub struct TsGrid {
    timescale: TimeScale,
    nodes: Vec<f64>,
    segment: Vec<usize>,
}

impl TsGrid {
    /// `policy.n` panels are shared among the intervals in proportion to
    /// their length (at least 2 each); every interval is graded towards its
    /// left end with `policy.gamma`.
    pub fn new(timescale: TimeScale, policy: GridPolicy) -> Result<Self> {
        let continuous: f64 = timescale.segments().iter().map(|(a, b)| b - a).sum();
        let mut nodes = Vec::new();
        let mut segment = Vec::new();
        for (k, &(a, b)) in timescale.segments().iter().enumerate() {
            if a == b {
                nodes.push(a);
                segment.push(k);
                continue;
            }
            let share = ((policy.n as f64) * (b - a) / continuous).round() as usize;
            let local = make_grid_on(a, b, GridPolicy { n: share.max(2), gamma: policy.gamma })?;
            segment.extend(std::iter::repeat_n(k, local.len()));
            nodes.extend(local);
        }
        Ok(TsGrid { timescale, nodes, segment })
    }

    pub fn timescale(&self) -> &TimeScale {
        &self.timescale
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn segment_of_node(&self, i: usize) -> usize {
        self.segment[i]
    }

    /// True when nodes `i` and `i + 1` bound a real panel of one interval;
    /// false when they straddle a gap.
    pub fn is_continuous_panel(&self, i: usize) -> bool {
        self.segment[i] == self.segment[i + 1]
    }

    /// Node `i` is right-scattered exactly when the next node lies in a
    /// later segment.
    pub fn is_right_scattered(&self, i: usize) -> bool {
        i + 1 < self.len() && !self.is_continuous_panel(i)
    }

    pub fn index_of(&self, t: f64) -> Result<usize> {
        if !self.timescale.contains(t) {
            return Err(Error::domain(format!("{t} is not in the time scale")));
        }
        self.nodes
            .binary_search_by(|x| x.total_cmp(&t))
            .map_err(|_| Error::domain(format!("{t} lies in the time scale but is not a sample node")))
    }

    /// Node range `lo..=hi` of the segment holding node `i`.
    pub fn segment_range(&self, i: usize) -> (usize, usize) {
        let k = self.segment[i];
        let lo = self.segment.partition_point(|&s| s < k);
        let hi = self.segment.partition_point(|&s| s <= k) - 1;
        (lo, hi)
    }
}

/// A function on a time scale, sampled on a [`TsGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct TsGridFn {
    grid: TsGrid,
    values: Vec<f64>,
}

impl TsGridFn {
    pub fn new(grid: TsGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes but {} values",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite value at node t = {}",
                grid.nodes()[i]
            )));
        }
        Ok(TsGridFn { grid, values })
    }

    pub fn from_fn(grid: TsGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        TsGridFn::new(grid, values)
    }

    pub fn grid(&self) -> &TsGrid {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn timescale(&self) -> &TimeScale {
        self.grid.timescale()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_points_are_nodes() {
        let ts = TimeScale::new(vec![(0.0, 0.5), (0.75, 0.75), (1.0, 2.0), (3.0, 3.0)]).unwrap();
        let g = TsGrid::new(ts, GridPolicy::uniform(6)).unwrap();
        for p in [0.0, 0.5, 0.75, 1.0, 2.0, 3.0] {
            assert!(g.nodes().contains(&p), "{p} missing");
        }
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        let i = g.index_of(0.5).unwrap();
        assert!(g.is_right_scattered(i));
        assert!(!g.is_right_scattered(g.index_of(1.0).unwrap()));
        assert!(!g.is_right_scattered(g.len() - 1));
        assert_eq!(g.segment_range(g.index_of(1.0).unwrap()), (g.index_of(1.0).unwrap(), g.index_of(2.0).unwrap()));
    }

    #[test]
    fn non_nodes_are_rejected() {
        let ts = TimeScale::new(vec![(0.0, 1.0), (2.0, 2.0)]).unwrap();
        let g = TsGrid::new(ts, GridPolicy::uniform(4)).unwrap();
        assert!(g.index_of(1.5).is_err());
        assert!(g.index_of(0.1).is_err());
        assert!(g.index_of(0.25).is_ok());
    }
}
