use alloc::vec::Vec;

use crate::{Error, Result};

/// A subinterval of `[0,1]`.
///
/// Cells are half-open `[lo, hi)` except that a cell whose right end is `1`
/// also contains `1`. Covering computations treat every member as closed,
/// which does not change a covering number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.is_point() {
            return x == self.lo;
        }
        self.lo <= x && (x < self.hi || (x == 1.0 && self.hi == 1.0))
    }

    /// Left endpoint of cell `i` when the interval is split into `n` equal cells.
    pub fn cell_lo(&self, i: u32, n: u32) -> f64 {
        if i == n {
            return self.hi;
        }
        self.lo + self.width() * i as f64 / n as f64
    }

    /// Cell `i` (0-based) of the split into `n` equal cells.
    pub fn cell(&self, i: u32, n: u32) -> Interval {
        Interval::new(self.cell_lo(i, n), self.cell_lo(i + 1, n))
    }

    pub fn split(&self, n: u32) -> Vec<Interval> {
        (0..n).map(|i| self.cell(i, n)).collect()
    }

    pub fn translate(&self, by: f64) -> Interval {
        Interval::new(self.lo + by, self.hi + by)
    }
}

/// Exact 1-D `delta`-covering number of a finite union of closed intervals
/// and points, with covers of the form `[x, x + delta]`.
///
/// Greedy placement from the left is optimal in one dimension: each new cover
/// starts at the leftmost point not yet covered.
pub fn covering_number(set: &[Interval], delta: f64) -> Result<usize> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut members: Vec<Interval> = set.to_vec();
    members.sort_by(|a, b| a.lo.total_cmp(&b.lo));

    let mut count = 0usize;
    // Right end of the last placed cover.
    let mut reach = f64::NEG_INFINITY;
    for m in members {
        if m.hi <= reach {
            continue;
        }
        let start = if m.lo <= reach { reach } else { m.lo };
        let mut k = 1usize;
        while start + k as f64 * delta < m.hi {
            k += 1;
        }
        count += k;
        reach = start + k as f64 * delta;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn spread_points() {
        let s = [Interval::point(0.1), Interval::point(0.5), Interval::point(0.9)];
        assert_eq!(covering_number(&s, 0.2), Ok(3));
    }

    #[test]
    fn single_interval() {
        assert_eq!(covering_number(&[Interval::new(0.0, 0.3)], 0.1), Ok(3));
        assert_eq!(covering_number(&[Interval::new(0.0, 1.0)], 0.25), Ok(4));
    }

    #[test]
    fn two_components() {
        let s = [Interval::new(0.1, 0.2), Interval::new(0.5, 0.6)];
        assert_eq!(covering_number(&s, 0.15), Ok(2));
    }

    #[test]
    fn bridging_cover() {
        // One cover of width 0.25 reaches from 0.0 to 0.25 and takes both.
        let s = [Interval::new(0.0, 0.1), Interval::new(0.2, 0.25)];
        assert_eq!(covering_number(&s, 0.25), Ok(1));
    }

    #[test]
    fn empty_set() {
        assert_eq!(covering_number(&[], 0.1), Err(Error::EmptySet));
    }

    #[test]
    fn split_is_exact_for_dyadic() {
        let parent = Interval::new(0.25, 0.75);
        let cells = parent.split(8);
        let total: f64 = cells.iter().map(|c| c.width()).sum();
        assert_eq!(total, parent.width());
        assert_eq!(cells[7].hi, 0.75);
    }

    #[test]
    fn contains_closed_at_one() {
        let c = Interval::new(0.75, 1.0);
        assert!(c.contains(1.0));
        assert!(!Interval::new(0.5, 0.75).contains(0.75));
        assert!(Interval::new(0.5, 0.75).contains(0.5));
    }

    #[test]
    fn midpoint_between_ends() {
        for (lo, hi) in [(0.0, 1.0), (0.3, 0.3), (0.125, 0.5)] {
            let m = Interval::new(lo, hi).midpoint();
            assert!(lo <= m && m <= hi);
        }
    }
}
