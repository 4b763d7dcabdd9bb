use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use crate::bounds::NoiseConstants;
use crate::interval::Interval;
use crate::math::log2;
use crate::noisy::{bz_alpha, BeliefGrid};
use crate::params::{ProblemParams, Setting};
use crate::session::{Session, Step};
use crate::Result;

/// Accuracy definition the stage lengths are tuned for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `E|X̂ − X*| ≤ ε/2`.
    Avg,
    /// `P{|X̂ − X*| > ε/2} ≤ 1/M`.
    Whp,
}

/// Stage lengths of the noisy private strategy, rounded up to integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyStageConfig {
    pub l_prime: u32,
    pub k1: u32,
    pub m: u32,
    pub k2: u32,
    pub variant: Variant,
}

fn ceil_u32(x: f64) -> u32 {
    libm::ceil(x).max(0.0) as u32
}

impl NoisyStageConfig {
    pub fn avg(params: &ProblemParams) -> Result<Self> {
        let pp = params.validate(Setting::BayesNoisyAvg)?;
        let c = NoiseConstants::new(pp.p.unwrap());
        let (eps, delta, l) = (pp.epsilon, pp.delta, pp.l as f64);
        Ok(NoisyStageConfig {
            l_prime: 7 * pp.l,
            k1: ceil_u32(log2(8.0 / (7.0 * eps * l * delta)) / c.c3),
            m: ceil_u32(log2(64.0 * delta / eps) / c.c4),
            k2: ceil_u32(2.0 * log2(4.0 * core::f64::consts::SQRT_2 * delta / eps) / c.c3),
            variant: Variant::Avg,
        })
    }

    pub fn whp(params: &ProblemParams) -> Result<Self> {
        let pp = params.validate(Setting::BayesNoisyWhp)?;
        let c = NoiseConstants::new(pp.p.unwrap());
        let big_m = pp.m.unwrap();
        let (eps, delta) = (pp.epsilon, pp.delta);
        Ok(NoisyStageConfig {
            l_prime: 7 * pp.l,
            k1: ceil_u32(log2(3.0 * big_m / delta) / c.c3),
            m: ceil_u32(log2(12.0 * big_m) / c.c4),
            k2: ceil_u32(log2(12.0 * big_m * delta / eps) / c.c3),
            variant: Variant::Whp,
        })
    }

    pub fn total_queries(&self) -> u64 {
        let lp = self.l_prime as u64;
        self.k1 as u64 + (lp - 1) * self.m as u64 + lp * self.k2 as u64
    }
}

/// Index `k̂ ∈ 1..=L′` maximizing `Σ_{i<k} m_i + Σ_{i≥k} (m − m_i)`, leftmost
/// on ties. `tallies[i−1]` is the number of 1-responses at interior endpoint `i`.
pub fn mle_subinterval(tallies: &[u32], m: u32) -> usize {
    // Score of k = 1: every endpoint is claimed to lie right of the target.
    let mut score: i64 = tallies.iter().map(|&t| (m - t) as i64).sum();
    let mut best = (score, 1usize);
    for (i, &t) in tallies.iter().enumerate() {
        // Moving from k to k+1 flips endpoint k to the left of the target.
        score += t as i64 - (m - t) as i64;
        if score > best.0 {
            best = (score, i + 2);
        }
    }
    best.1
}

#[derive(Debug, Clone)]
enum Stage {
    Coarse { belief: BeliefGrid, left: u32, pending: Option<u32> },
    Vote { k: u32, asked: u32, tallies: Vec<u32> },
    Fine { khat: u32, belief: BeliefGrid, left: u32, pending: Option<u32>, j: u32, hit: bool },
    Done(f64),
}

/// Coarse belief-grid search for `I`, repeated endpoint votes on the `L′`-split
/// of `I`, then a fine belief-grid search inside the voted cell with translated
/// copies of every query in the other `L′ − 1` cells.
#[derive(Debug, Clone)]
pub struct NoisyMultistage {
    cfg: NoisyStageConfig,
    eps: f64,
    alpha: f64,
    rng: ChaCha8Rng,
    iv: Interval,
    stage: Stage,
}

impl NoisyMultistage {
    /// `bz_rng` drives the randomized query selection of both searches.
    pub fn new(cfg: NoisyStageConfig, params: &ProblemParams, bz_rng: ChaCha8Rng) -> Self {
        let p = params.p.expect("noisy strategy needs p");
        let coarse = BeliefGrid::with_cell_width(Interval::UNIT, cfg.l_prime as f64 * params.delta);
        let mut s = NoisyMultistage {
            cfg,
            eps: params.epsilon,
            alpha: bz_alpha(p),
            rng: bz_rng,
            iv: Interval::UNIT,
            stage: Stage::Coarse { belief: coarse, left: cfg.k1, pending: None },
        };
        s.advance();
        s
    }

    pub fn config(&self) -> NoisyStageConfig {
        self.cfg
    }

    fn cell_lo(&self, k: u32) -> f64 {
        self.iv.cell_lo(k, self.cfg.l_prime)
    }

    fn advance(&mut self) {
        loop {
            let next = match &self.stage {
                Stage::Coarse { belief, left: 0, .. } => {
                    self.iv = belief.cell(belief.argmax_cell());
                    Stage::Vote { k: 1, asked: 0, tallies: vec![0; self.cfg.l_prime as usize - 1] }
                }
                Stage::Vote { k, tallies, .. } if *k >= self.cfg.l_prime || self.cfg.m == 0 => {
                    let khat = mle_subinterval(tallies, self.cfg.m) as u32 - 1;
                    let width = self.iv.width() / self.cfg.l_prime as f64;
                    let belief = BeliefGrid::with_cell_width(Interval::new(0.0, width), self.eps / 4.0);
                    Stage::Fine { khat, belief, left: self.cfg.k2, pending: None, j: 0, hit: false }
                }
                Stage::Fine { khat, belief, left: 0, .. } => {
                    let offset = belief.cell(belief.argmax_cell()).midpoint();
                    Stage::Done(self.cell_lo(*khat) + offset)
                }
                _ => return,
            };
            self.stage = next;
        }
    }
}

impl Session for NoisyMultistage {
    fn step(&mut self) -> Step {
        match &mut self.stage {
            Stage::Coarse { belief, pending, .. } => {
                let j = *pending.get_or_insert_with(|| belief.select_endpoint(&mut self.rng));
                Step::Query(belief.endpoint(j))
            }
            Stage::Vote { k, .. } => Step::Query(self.iv.cell_lo(*k, self.cfg.l_prime)),
            Stage::Fine { belief, pending, j, .. } => {
                let e = *pending.get_or_insert_with(|| belief.select_endpoint(&mut self.rng));
                let offset = belief.endpoint(e);
                Step::Query(self.iv.cell_lo(*j, self.cfg.l_prime) + offset)
            }
            Stage::Done(x) => Step::Done(*x),
        }
    }

    fn respond(&mut self, r: bool) {
        let l_prime = self.cfg.l_prime;
        match &mut self.stage {
            Stage::Coarse { belief, left, pending } => {
                let j = pending.take().expect("response without a query");
                belief.update_at(j, r, self.alpha);
                *left -= 1;
            }
            Stage::Vote { k, asked, tallies } => {
                tallies[*k as usize - 1] += r as u32;
                *asked += 1;
                if *asked == self.cfg.m {
                    *asked = 0;
                    *k += 1;
                }
            }
            Stage::Fine { khat, belief, left, pending, j, hit } => {
                // Copies in the other cells are answered but not used.
                if *j == *khat {
                    *hit = r;
                }
                *j += 1;
                if *j == l_prime {
                    let e = pending.take().expect("response without a query");
                    belief.update_at(e, *hit, self.alpha);
                    *j = 0;
                    *left -= 1;
                }
            }
            Stage::Done(_) => debug_assert!(false, "response after done"),
        }
        self.advance();
    }

    fn coin(&mut self, _value: u32) {
        debug_assert!(false, "noisy strategy draws its own randomness");
    }
}
