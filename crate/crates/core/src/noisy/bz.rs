use alloc::format;

use rand::Rng;

use crate::interval::Interval;
use crate::noisy::BeliefGrid;
use crate::oracle::{answer, NoiseModel};
use crate::transcript::Transcript;
use crate::{Error, Result};

/// Tilt parameter `√p / (√p + √(1−p))`.
pub fn bz_alpha(p: f64) -> f64 {
    let a = libm::sqrt(p);
    a / (a + libm::sqrt(1.0 - p))
}

/// `n` steps of the belief-grid search on `support` with cells of width about
/// `cell_width`, against a target behind a channel that is correct with
/// probability `p`. Returns the leftmost cell of maximal final belief.
///
/// Query selection draws from `bz_rng`, response noise from `noise_rng`.
pub fn bz_run<N, B>(
    support: Interval,
    cell_width: f64,
    n: u32,
    p: f64,
    target: f64,
    noise_rng: &mut N,
    bz_rng: &mut B,
) -> Result<(Interval, Transcript)>
where
    N: Rng + ?Sized,
    B: Rng + ?Sized,
{
    if !(p > 0.5 && p < 1.0) {
        return Err(Error::RegimeViolation(format!("p = {p} must lie in (1/2, 1)")));
    }
    let alpha = bz_alpha(p);
    let mut belief = BeliefGrid::with_cell_width(support, cell_width);
    let mut t = Transcript::new();
    for _ in 0..n {
        let j = belief.select_endpoint(bz_rng);
        let q = belief.endpoint(j);
        let r = answer(q, target, NoiseModel::Flip(p), noise_rng);
        t.push(q, r);
        belief.update_at(j, r, alpha);
    }
    let cell = belief.cell(belief.argmax_cell());
    t.set_estimate(cell.midpoint());
    Ok((cell, t))
}
