//! Small registered runs whose transcript structure is known by hand.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::math::pow2;
use crate::noiseless::{choose_guess_plan, LargeDelta, Multistage, MultistageConfig, SmallDelta};
use crate::oracle::NoiseModel;
use crate::params::ProblemParams;
use crate::seed::{SeedSpec, Stream};
use crate::session::{drive, Session};
use crate::transcript::Transcript;
use crate::{Error, Result};

/// Seed used by every example.
pub const EXAMPLE_SEED: u64 = 7;

pub const EXAMPLES: [(&str, &str); 3] = [
    ("bayes_L5", "staged Bayesian strategy, L = 5, K1 = 3, K2 = 3: phases of 3, 4 and 15 queries"),
    ("det_small_L3", "guesses at bisection midpoints, L = 3; second guess is correct, fake bisection follows"),
    ("det_large_L7K2", "guess at 0, K = 2 bisection guesses, 4 grid guesses 0.05 apart, L = 7"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub name: String,
    pub passed: bool,
    /// One line per mismatch between the run and the expectation.
    pub diffs: Vec<String>,
    pub transcript: Transcript,
}

struct Checker {
    diffs: Vec<String>,
}

impl Checker {
    fn eq<T: PartialEq + core::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.diffs.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }

    fn check(&mut self, what: &str, ok: bool) {
        if !ok {
            self.diffs.push(what.to_string());
        }
    }
}

fn run<S: Session>(mut s: S, x: f64, seed: SeedSpec) -> Transcript {
    drive(&mut s, x, NoiseModel::Noiseless, &mut seed.rng(Stream::Noise), &mut seed.rng(Stream::Coins))
}

fn evenly_spaced(batch: &[f64], gap: f64) -> bool {
    batch.windows(2).all(|w| (w[1] - w[0] - gap).abs() < 1e-12)
}

fn pairs_are_guesses(qs: &[f64], eps: f64) -> bool {
    qs.chunks(2).all(|p| p.len() == 2 && p[1] - p[0] == eps)
}

pub fn replay_example(name: &str) -> Result<ExampleReport> {
    let seed = SeedSpec::new(EXAMPLE_SEED, 0);
    let mut c = Checker { diffs: Vec::new() };
    let transcript = match name {
        "bayes_L5" => {
            let params = ProblemParams::noiseless(0.006, 0.02, 5);
            let cfg = MultistageConfig::bayes(&params)?;
            c.eq("(K1, K2)", (cfg.k1, cfg.k2), (3, 3));
            c.eq("phase sizes", cfg.phase_sizes(), (3, 4, 15));
            let t = run(Multistage::new(cfg), 0.7, seed);
            c.eq("query count", t.len(), 22);
            let cell = pow2(-3) / 5.0;
            let endpoints = &t.queries[3..7];
            c.check("phase-2 endpoints split I evenly", evenly_spaced(endpoints, cell));
            for (b, batch) in t.queries[7..].chunks(5).enumerate() {
                c.check(&format!("batch {b} is a translation of the cells"), evenly_spaced(batch, cell));
            }
            c.check("estimate within eps/2", (t.estimate.unwrap() - 0.7).abs() <= 0.003);
            t
        }
        "det_small_L3" => {
            let eps = pow2(-10);
            let x = 0.25 + eps / 2.0;
            let t = run(SmallDelta::new(eps, 3), x, seed);
            c.eq("query count", t.len(), 13);
            c.eq("first guess", t.queries[0], 0.5);
            c.eq("second guess", t.queries[2], 0.25);
            c.check("guesses come in (s, s + eps) pairs", pairs_are_guesses(&t.queries[..6], eps));
            let twin = run(SmallDelta::new(eps, 3), 0.25, seed);
            c.check("continuation ignores the target after the hit", twin.queries == t.queries);
            c.eq("estimate", t.estimate, Some(0.25 + eps / 2.0));
            t
        }
        "det_large_L7K2" => {
            let eps = pow2(-10);
            let plan = choose_guess_plan(0.03, 7)?;
            c.eq("K", plan.k, 2);
            let t = run(LargeDelta::new(eps, 7, plan), 0.61, seed);
            c.eq("query count", t.len(), 20);
            c.eq("first guess", t.queries[0], 0.0);
            c.eq("first bisection guess", t.queries[2], 0.5);
            c.check("guesses come in (s, s + eps) pairs", pairs_are_guesses(&t.queries[..14], eps));
            let anchors: Vec<f64> = t.queries[6..14].iter().step_by(2).copied().collect();
            c.eq("grid guesses", anchors.len(), 4);
            c.check("grid guesses 0.05 apart", evenly_spaced(&anchors, 0.05));
            c.check("estimate within eps/2", (t.estimate.unwrap() - 0.61).abs() <= eps / 2.0);
            t
        }
        _ => return Err(Error::ExampleNotFound(name.to_string())),
    };
    Ok(ExampleReport { name: name.to_string(), passed: c.diffs.is_empty(), diffs: c.diffs, transcript })
}
