//! Guess-planting strategies for the deterministic setting.
//!
//! A guess is the query pair `(s, s + ε)`; it is correct when the target lies
//! in `[s, s + ε)`. Once a guess is correct the learner already knows the
//! answer, and every later branch is driven by coins instead of responses so
//! the rest of the query sequence carries no information about the target.

use alloc::format;

use crate::interval::Interval;
use crate::math::{halvings_to, pow2};
use crate::session::{Session, Step};
use crate::{Error, Result};

/// Number of bisection guesses `K` and the resulting grid cell width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuessPlan {
    pub k: u32,
    pub cell_width: f64,
}

/// Smallest `K < L` with `2^{-K}/(L−K) ∈ [δ, 2δ]`.
pub fn choose_guess_plan(delta: f64, l: u32) -> Result<GuessPlan> {
    if delta <= pow2(-(l as i32)) {
        return Err(Error::RegimeViolation(format!("delta > 2^-{l} fails: {delta}")));
    }
    for k in 0..l {
        let w = pow2(-(k as i32)) / (l - k) as f64;
        if delta <= w && w <= 2.0 * delta {
            return Ok(GuessPlan { k, cell_width: w });
        }
    }
    Err(Error::RegimeViolation(format!("no K with 2^-K/(L-K) in [{delta}, {}]", 2.0 * delta)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum GuessStep {
    /// Waiting for the response at `s`.
    First,
    /// Waiting for the response at `s + ε`; holds the first response.
    Second(bool),
    /// Waiting for a coin to pick the half.
    Coin,
}

/// Shared bookkeeping for one `(s, s + ε)` pair.
#[derive(Debug, Clone, Copy)]
struct Pair {
    s: f64,
    step: GuessStep,
}

/// Guesses at bisection midpoints, then (possibly fake) bisection.
/// Used when `δ ≤ 2^{-L}`.
#[derive(Debug, Clone)]
pub struct SmallDelta {
    eps: f64,
    l: u32,
    iv: Interval,
    guesses: u32,
    pair: Option<Pair>,
    final_left: u32,
    // Bisection query whose response or coin is pending.
    final_pending: bool,
    hit: Option<f64>,
}

impl SmallDelta {
    pub fn new(epsilon: f64, l: u32) -> Self {
        SmallDelta {
            eps: epsilon,
            l,
            iv: Interval::UNIT,
            guesses: 0,
            pair: None,
            final_left: halvings_to(pow2(-(l as i32)), epsilon),
            final_pending: false,
            hit: None,
        }
    }

    pub fn total_queries(epsilon: f64, l: u32) -> u64 {
        2 * l as u64 + halvings_to(pow2(-(l as i32)), epsilon) as u64
    }

    pub fn guessed(&self) -> bool {
        self.hit.is_some()
    }

    fn halve(&mut self, right: bool) {
        let mid = self.iv.midpoint();
        if right {
            self.iv.lo = mid;
        } else {
            self.iv.hi = mid;
        }
    }
}

impl Session for SmallDelta {
    fn step(&mut self) -> Step {
        if self.guesses < self.l {
            let pair = *self.pair.get_or_insert(Pair { s: self.iv.midpoint(), step: GuessStep::First });
            return match pair.step {
                GuessStep::First => Step::Query(pair.s),
                GuessStep::Second(_) => Step::Query(pair.s + self.eps),
                GuessStep::Coin => Step::Coin(2),
            };
        }
        if self.final_pending {
            return Step::Coin(2);
        }
        if self.final_left > 0 {
            return Step::Query(self.iv.midpoint());
        }
        match self.hit {
            Some(s) => Step::Done(s + self.eps / 2.0),
            None => Step::Done(self.iv.midpoint()),
        }
    }

    fn respond(&mut self, r: bool) {
        if self.guesses < self.l {
            let pair = self.pair.as_mut().expect("respond without a pending guess");
            match pair.step {
                GuessStep::First => pair.step = GuessStep::Second(r),
                GuessStep::Second(r1) => {
                    let s = pair.s;
                    if self.hit.is_none() && r1 && !r {
                        self.hit = Some(s);
                    }
                    if self.hit.is_some() {
                        pair.step = GuessStep::Coin;
                    } else {
                        self.pair = None;
                        self.guesses += 1;
                        self.halve(r1);
                    }
                }
                GuessStep::Coin => debug_assert!(false, "response while a coin is pending"),
            }
            return;
        }
        if self.hit.is_some() {
            self.final_pending = true;
        } else {
            self.halve(r);
            self.final_left -= 1;
        }
    }

    fn coin(&mut self, value: u32) {
        if self.guesses < self.l {
            self.pair = None;
            self.guesses += 1;
        } else {
            self.final_pending = false;
            self.final_left -= 1;
        }
        self.halve(value == 1);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Stage {
    /// Guess at 0, then `K` bisection guesses; `index` counts guesses done.
    Bisect { index: u32 },
    /// Guesses at the interior grid points of the split of `I`.
    Grid { index: u32, ones: u32 },
    /// Waiting for a coin to pick the grid cell.
    PickCell,
    Final { left: u32, pending_coin: bool },
}

/// Guess at 0, `K` bisection guesses, `L − K − 1` grid guesses, then (possibly
/// fake) bisection inside one grid cell. Used when `δ > 2^{-L}`.
#[derive(Debug, Clone)]
pub struct LargeDelta {
    eps: f64,
    l: u32,
    plan: GuessPlan,
    iv: Interval,
    stage: Stage,
    pair: Option<Pair>,
    hit: Option<f64>,
}

impl LargeDelta {
    pub fn new(epsilon: f64, l: u32, plan: GuessPlan) -> Self {
        LargeDelta {
            eps: epsilon,
            l,
            plan,
            iv: Interval::UNIT,
            stage: Stage::Bisect { index: 0 },
            pair: None,
            hit: None,
        }
    }

    /// Queries actually submitted, including the trivial one at 0.
    pub fn total_queries(epsilon: f64, l: u32, plan: GuessPlan) -> u64 {
        2 * l as u64 + halvings_to(plan.cell_width, epsilon) as u64
    }

    pub fn guessed(&self) -> bool {
        self.hit.is_some()
    }

    fn cells(&self) -> u32 {
        self.l - self.plan.k
    }

    fn anchor(&self) -> f64 {
        match self.stage {
            Stage::Bisect { index: 0 } => 0.0,
            Stage::Bisect { .. } => self.iv.midpoint(),
            Stage::Grid { index, .. } => self.iv.cell_lo(index + 1, self.cells()),
            _ => unreachable!(),
        }
    }

    fn halve(&mut self, right: bool) {
        let mid = self.iv.midpoint();
        if right {
            self.iv.lo = mid;
        } else {
            self.iv.hi = mid;
        }
    }

    fn enter_grid(&mut self) {
        self.stage = Stage::Grid { index: 0, ones: 0 };
        if self.cells() == 1 {
            self.leave_grid(0);
        }
    }

    fn leave_grid(&mut self, ones: u32) {
        if self.hit.is_some() {
            self.stage = Stage::PickCell;
        } else {
            self.enter_cell(ones);
        }
    }

    fn enter_cell(&mut self, c: u32) {
        self.iv = self.iv.cell(c, self.cells());
        let left = halvings_to(self.plan.cell_width, self.eps);
        self.stage = Stage::Final { left, pending_coin: false };
    }

    /// Completes a guess pair with first response `r1` and second `r2`.
    fn finish_pair(&mut self, r1: bool, r2: bool) {
        let s = self.pair.take().expect("no pending pair").s;
        if self.hit.is_none() && r1 && !r2 {
            self.hit = Some(s);
        }
        match self.stage {
            Stage::Bisect { index } => {
                if index == 0 {
                    self.after_bisect_guess(0);
                } else if self.hit.is_some() {
                    // Fake branch: keep the pair slot for the coin.
                    self.pair = Some(Pair { s, step: GuessStep::Coin });
                } else {
                    self.halve(r1);
                    self.after_bisect_guess(index);
                }
            }
            Stage::Grid { index, ones } => {
                let ones = ones + r1 as u32;
                if index + 2 >= self.cells() {
                    self.leave_grid(ones);
                } else {
                    self.stage = Stage::Grid { index: index + 1, ones };
                }
            }
            _ => unreachable!(),
        }
    }

    fn after_bisect_guess(&mut self, index: u32) {
        if index >= self.plan.k {
            self.enter_grid();
        } else {
            self.stage = Stage::Bisect { index: index + 1 };
        }
    }
}

impl Session for LargeDelta {
    fn step(&mut self) -> Step {
        match self.stage {
            Stage::Bisect { .. } | Stage::Grid { .. } => {
                let s = match self.pair {
                    Some(p) => p.s,
                    None => self.anchor(),
                };
                let pair = *self.pair.get_or_insert(Pair { s, step: GuessStep::First });
                match pair.step {
                    GuessStep::First => Step::Query(pair.s),
                    GuessStep::Second(_) => Step::Query(pair.s + self.eps),
                    GuessStep::Coin => Step::Coin(2),
                }
            }
            Stage::PickCell => Step::Coin(self.cells()),
            Stage::Final { pending_coin: true, .. } => Step::Coin(2),
            Stage::Final { left, .. } if left > 0 => Step::Query(self.iv.midpoint()),
            Stage::Final { .. } => match self.hit {
                Some(s) => Step::Done(s + self.eps / 2.0),
                None => Step::Done(self.iv.midpoint()),
            },
        }
    }

    fn respond(&mut self, r: bool) {
        match self.stage {
            Stage::Bisect { .. } | Stage::Grid { .. } => {
                let pair = self.pair.as_mut().expect("respond without a pending guess");
                match pair.step {
                    GuessStep::First => pair.step = GuessStep::Second(r),
                    GuessStep::Second(r1) => self.finish_pair(r1, r),
                    GuessStep::Coin => debug_assert!(false, "response while a coin is pending"),
                }
            }
            Stage::Final { left, .. } => {
                if self.hit.is_some() {
                    self.stage = Stage::Final { left, pending_coin: true };
                } else {
                    self.halve(r);
                    self.stage = Stage::Final { left: left - 1, pending_coin: false };
                }
            }
            Stage::PickCell => debug_assert!(false, "response while a coin is pending"),
        }
    }

    fn coin(&mut self, value: u32) {
        match self.stage {
            Stage::Bisect { index } => {
                self.pair = None;
                self.halve(value == 1);
                self.after_bisect_guess(index);
            }
            Stage::PickCell => self.enter_cell(value),
            Stage::Final { left, .. } => {
                self.halve(value == 1);
                self.stage = Stage::Final { left: left - 1, pending_coin: false };
            }
            Stage::Grid { .. } => debug_assert!(false, "grid guesses never ask for coins"),
        }
    }
}
