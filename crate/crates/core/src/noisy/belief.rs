use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::interval::Interval;
use crate::{Error, Result};

/// Piecewise-constant belief over equal cells of `support`.
///
/// Stored as cell masses summing to 1; the density of a cell is its mass over
/// the cell width. Queries are only ever placed on cell endpoints, so every
/// update keeps the density constant inside each cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefGrid {
    support: Interval,
    mass: Vec<f64>,
}

impl BeliefGrid {
    pub fn uniform(support: Interval, cells: u32) -> Self {
        assert!(cells >= 1);
        BeliefGrid { support, mass: vec![1.0 / cells as f64; cells as usize] }
    }

    /// Cells of width at least `width`: the support is split into
    /// `⌊|support| / width⌋` equal cells (at least one).
    pub fn with_cell_width(support: Interval, width: f64) -> Self {
        let n = libm::floor(support.width() / width).max(1.0) as u32;
        Self::uniform(support, n)
    }

    /// Belief with the given (not necessarily normalized) cell masses.
    pub fn from_masses(support: Interval, masses: Vec<f64>) -> Self {
        assert!(!masses.is_empty());
        let mut b = BeliefGrid { support, mass: masses };
        b.normalize();
        b
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn cells(&self) -> u32 {
        self.mass.len() as u32
    }

    pub fn cell_width(&self) -> f64 {
        self.support.width() / self.cells() as f64
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn density(&self, j: u32) -> f64 {
        self.mass[j as usize] / self.cell_width()
    }

    /// Position of endpoint `j` in `0..=cells`.
    pub fn endpoint(&self, j: u32) -> f64 {
        self.support.cell_lo(j, self.cells())
    }

    pub fn cell(&self, j: u32) -> Interval {
        self.support.cell(j, self.cells())
    }

    pub fn endpoint_index(&self, q: f64) -> Result<u32> {
        (0..=self.cells()).find(|&j| self.endpoint(j) == q).ok_or(Error::QueryOffGrid(q))
    }

    /// Tilts the belief after response `r` to a query at endpoint `j`:
    /// cells on the side the response points to are scaled by `2α`, the
    /// others by `2(1−α)`, then everything is renormalized.
    pub fn update_at(&mut self, j: u32, r: bool, alpha: f64) {
        let (left, right) = if r { (2.0 * (1.0 - alpha), 2.0 * alpha) } else { (2.0 * alpha, 2.0 * (1.0 - alpha)) };
        for (i, m) in self.mass.iter_mut().enumerate() {
            *m *= if (i as u32) < j { left } else { right };
        }
        self.normalize();
    }

    pub fn update(&mut self, q: f64, r: bool, alpha: f64) -> Result<()> {
        let j = self.endpoint_index(q)?;
        self.update_at(j, r, alpha);
        Ok(())
    }

    fn normalize(&mut self) {
        let total: f64 = self.mass.iter().sum();
        for m in &mut self.mass {
            *m /= total;
        }
    }

    /// The cell holding the median and the probability `π₁` of querying its
    /// left endpoint, chosen so the expected query equals the median.
    pub fn median_cell(&self) -> (u32, f64) {
        let mut before = 0.0;
        let last = self.mass.len() - 1;
        for (j, &w) in self.mass.iter().enumerate() {
            if before + w > 0.5 || j == last {
                let pi1 = if w > 0.0 { (2.0 * (before + w) - 1.0) / (2.0 * w) } else { 1.0 };
                return (j as u32, pi1.clamp(0.0, 1.0));
            }
            before += w;
        }
        unreachable!()
    }

    /// The median of the belief.
    pub fn median(&self) -> f64 {
        let (j, _) = self.median_cell();
        let before: f64 = self.mass[..j as usize].iter().sum();
        let w = self.mass[j as usize];
        self.endpoint(j) + self.cell_width() * (0.5 - before) / w
    }

    /// Endpoint index of the next query. Draws exactly one uniform from `rng`.
    ///
    /// An endpoint on the support edge says nothing, so when the draw lands
    /// there and the other endpoint of the median cell is interior, the
    /// interior one is used instead.
    pub fn select_endpoint<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let (j, pi1) = self.median_cell();
        let u: f64 = rng.gen();
        let (s, t) = (j, j + 1);
        let n = self.cells();
        let edge = |e: u32| e == 0 || e == n;
        let pick = if u < pi1 { s } else { t };
        let other = if pick == s { t } else { s };
        if edge(pick) && !edge(other) {
            other
        } else {
            pick
        }
    }

    /// Leftmost cell of maximal mass.
    pub fn argmax_cell(&self) -> u32 {
        let mut best = 0;
        for (j, &m) in self.mass.iter().enumerate() {
            if m > self.mass[best] {
                best = j;
            }
        }
        best as u32
    }
}
