use crate::interval::Interval;
use crate::math::{ceil_log2, floor_log2, halvings_to};
use crate::params::{ProblemParams, Setting};
use crate::session::{Session, Step};
use crate::Result;

/// Shape of a locate / split / replicate run.
///
/// `k1` bisection steps shrink `[0,1]` to `I`, the `clones − 1` interior
/// endpoints of the equal split of `I` select the cell holding the target, and
/// `k2` batches of `clones` translated queries bisect inside every cell at
/// once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultistageConfig {
    pub k1: u32,
    pub clones: u32,
    pub k2: u32,
}

impl MultistageConfig {
    /// The staged Bayesian strategy.
    pub fn bayes(params: &ProblemParams) -> Result<Self> {
        let p = params.validate(Setting::BayesNoiseless)?;
        let l = p.l as f64;
        let k1 = floor_log2(1.0 / (l * p.delta)).max(0) as u32;
        let k2 = (ceil_log2(p.delta / p.epsilon) + 1).max(1) as u32;
        Ok(MultistageConfig { k1, clones: p.l, k2 })
    }

    /// Replicated bisection: split `[0,1]` into `L` cells right away.
    pub fn replicated(params: &ProblemParams) -> Self {
        let l = params.l as f64;
        let k2 = ceil_log2(1.0 / (l * params.epsilon)).max(0) as u32;
        MultistageConfig { k1: 0, clones: params.l, k2 }
    }

    /// Same split as [`MultistageConfig::bayes`] with `clones` cells, but the
    /// replicated phase stops as soon as the cell width reaches `epsilon`.
    pub fn tight(epsilon: f64, delta: f64, clones: u32) -> Self {
        let k1 = floor_log2(1.0 / (clones as f64 * delta)).max(0) as u32;
        let cell = crate::math::pow2(-(k1 as i32)) / clones as f64;
        MultistageConfig { k1, clones, k2: halvings_to(cell, epsilon) }
    }

    pub fn total_queries(&self) -> u64 {
        self.k1 as u64 + (self.clones as u64 - 1) + self.clones as u64 * self.k2 as u64
    }

    /// Query counts of the three phases.
    pub fn phase_sizes(&self) -> (u64, u64, u64) {
        (self.k1 as u64, self.clones as u64 - 1, self.clones as u64 * self.k2 as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Locate { left: u32 },
    Endpoints { j: u32, ones: u32 },
    Clones { istar: u32, batch: u32, j: u32, hit: bool },
    Done,
}

#[derive(Debug, Clone)]
pub struct Multistage {
    cfg: MultistageConfig,
    iv: Interval,
    // Offset interval shared by all cells during the replicated phase.
    u: f64,
    v: f64,
    phase: Phase,
    estimate: f64,
}

impl Multistage {
    pub fn new(cfg: MultistageConfig) -> Self {
        assert!(cfg.clones >= 1);
        let mut s = Multistage {
            cfg,
            iv: Interval::UNIT,
            u: 0.0,
            v: 0.0,
            phase: Phase::Locate { left: cfg.k1 },
            estimate: 0.0,
        };
        s.advance();
        s
    }

    pub fn config(&self) -> MultistageConfig {
        self.cfg
    }

    fn cell_lo(&self, j: u32) -> f64 {
        self.iv.cell_lo(j, self.cfg.clones)
    }

    fn advance(&mut self) {
        loop {
            self.phase = match self.phase {
                Phase::Locate { left: 0 } => Phase::Endpoints { j: 1, ones: 0 },
                Phase::Endpoints { j, ones } if j >= self.cfg.clones => {
                    self.u = 0.0;
                    self.v = self.iv.width() / self.cfg.clones as f64;
                    Phase::Clones { istar: ones, batch: 0, j: 0, hit: false }
                }
                Phase::Clones { istar, batch, .. } if batch >= self.cfg.k2 => {
                    self.estimate = self.cell_lo(istar) + (self.u + self.v) / 2.0;
                    Phase::Done
                }
                _ => return,
            };
        }
    }
}

impl Session for Multistage {
    fn step(&mut self) -> Step {
        match self.phase {
            Phase::Locate { .. } => Step::Query(self.iv.midpoint()),
            Phase::Endpoints { j, .. } => Step::Query(self.cell_lo(j)),
            Phase::Clones { j, .. } => Step::Query(self.cell_lo(j) + (self.u + self.v) / 2.0),
            Phase::Done => Step::Done(self.estimate),
        }
    }

    fn respond(&mut self, r: bool) {
        match &mut self.phase {
            Phase::Locate { left } => {
                let mid = self.iv.midpoint();
                if r {
                    self.iv.lo = mid;
                } else {
                    self.iv.hi = mid;
                }
                *left -= 1;
            }
            Phase::Endpoints { j, ones } => {
                *j += 1;
                *ones += r as u32;
            }
            Phase::Clones { istar, batch, j, hit } => {
                // Only the response in the target's cell is used.
                if *j == *istar {
                    *hit = r;
                }
                *j += 1;
                if *j == self.cfg.clones {
                    let mid = (self.u + self.v) / 2.0;
                    if *hit {
                        self.u = mid;
                    } else {
                        self.v = mid;
                    }
                    *j = 0;
                    *batch += 1;
                }
            }
            Phase::Done => debug_assert!(false, "response after done"),
        }
        self.advance();
    }

    fn coin(&mut self, _value: u32) {
        debug_assert!(false, "multistage never asks for coins");
    }
}
