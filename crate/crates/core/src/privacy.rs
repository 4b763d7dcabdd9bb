//! Exact information sets for the deterministic setting and Monte Carlo
//! breach rates for the Bayesian one.

use alloc::vec::Vec;

use crate::adversary::Adversary;
use crate::interval::{covering_number, Interval};
use crate::oracle::NoiseModel;
use crate::params::ProblemParams;
use crate::seed::{SeedSpec, Stream};
use crate::session::{drive, Session, Step};
use crate::strategy::{AnySession, Strategy};
use crate::trial::{bayes_targets, run_trial};
use crate::{Error, Result};

/// Targets that could have produced an observed query sequence, as sorted,
/// disjoint, maximal intervals. A member whose `lo == hi` is a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationSet {
    pub components: Vec<Interval>,
}

impl InformationSet {
    pub fn covering_number(&self, delta: f64) -> Result<usize> {
        covering_number(&self.components, delta)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.components.iter().any(|c| c.contains(x) || (c.is_point() && c.lo == x))
    }
}

/// Whether `session`, facing noiseless responses from `target`, can emit
/// exactly `observed` for some choice of its coins.
fn reproduces<S: Session + Clone>(mut session: S, target: f64, observed: &[f64], mut idx: usize) -> bool {
    loop {
        match session.step() {
            Step::Query(q) => {
                if idx >= observed.len() || q != observed[idx] {
                    return false;
                }
                session.respond(target >= q);
                idx += 1;
            }
            Step::Coin(n) => {
                return (0..n).any(|c| {
                    let mut branch = session.clone();
                    branch.coin(c);
                    reproduces(branch, target, observed, idx)
                });
            }
            Step::Done(_) => return idx == observed.len(),
        }
    }
}

/// The exact information set of `observed` for the strategy whose fresh
/// session is `fresh`.
///
/// All targets between two consecutive distinct query values receive the same
/// responses, so one representative per gap decides the whole gap.
pub fn information_set<S: Session + Clone>(fresh: &S, observed: &[f64]) -> Result<InformationSet> {
    let mut cuts: Vec<f64> = observed.iter().copied().filter(|q| (0.0..=1.0).contains(q)).collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut members: Vec<Interval> = Vec::new();
    for w in cuts.windows(2) {
        let gap = Interval::new(w[0], w[1]);
        if reproduces(fresh.clone(), gap.midpoint(), observed, 0) {
            members.push(gap);
        }
    }
    // Target exactly 1 answers a query at 1 differently from the last gap.
    if observed.contains(&1.0) && reproduces(fresh.clone(), 1.0, observed, 0) {
        members.push(Interval::point(1.0));
    }
    if members.is_empty() {
        return Err(Error::TranscriptMismatch);
    }

    let mut components: Vec<Interval> = Vec::new();
    for m in members {
        match components.last_mut() {
            Some(last) if last.hi == m.lo => last.hi = m.hi,
            _ => components.push(m),
        }
    }
    Ok(InformationSet { components })
}

/// Result of a deterministic privacy sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyReport {
    pub min_covering: usize,
    pub checked: usize,
    /// `(target, coin stream, covering number)` for every run below `L`.
    pub witnesses: Vec<(f64, u64, usize)>,
}

impl PrivacyReport {
    pub fn merge(mut self, other: PrivacyReport) -> PrivacyReport {
        self.min_covering = self.min_covering.min(other.min_covering);
        self.checked += other.checked;
        self.witnesses.extend(other.witnesses);
        self
    }
}

/// Targets `0, ε/3, 2ε/3, ...` up to 1, plus 1 itself.
pub fn det_target_grid(epsilon: f64) -> Vec<f64> {
    let step = epsilon / 3.0;
    let mut v: Vec<f64> = (0..).map(|k| k as f64 * step).take_while(|&x| x < 1.0).collect();
    v.push(1.0);
    v
}

/// Covering number of the information set left by one run with coins from
/// `spec`, for a 1-D strategy.
pub fn covering_after_run(strategy: Strategy, params: &ProblemParams, target: f64, spec: SeedSpec) -> Result<(usize, InformationSet)> {
    let fresh: AnySession = strategy.session(params, spec)?;
    let mut s = fresh.clone();
    let t = drive(&mut s, target, NoiseModel::Noiseless, &mut spec.rng(Stream::Noise), &mut spec.rng(Stream::Coins));
    let set = information_set(&fresh, t.query_view())?;
    Ok((set.covering_number(params.delta)?, set))
}

/// Product over coordinates of the per-coordinate covering numbers, for a
/// `d`-dimensional strategy and target.
pub fn product_covering_after_run(strategy: Strategy, params: &ProblemParams, target: &[f64], spec: SeedSpec) -> Result<usize> {
    let mut product = 1usize;
    for (i, &x) in target.iter().enumerate() {
        let i = i as u32;
        let fresh = strategy.coordinate_session(params, spec, i)?;
        let mut s = fresh.clone();
        let t = drive(
            &mut s,
            x,
            NoiseModel::Noiseless,
            &mut spec.coordinate_rng(Stream::Noise, i),
            &mut spec.coordinate_rng(Stream::Coins, i),
        );
        product *= information_set(&fresh, t.query_view())?.covering_number(params.delta)?;
    }
    Ok(product)
}

/// Checks every target against `streams` coin streams (trial indices
/// `0..streams` under `master_seed`).
pub fn verify_det_privacy(
    strategy: Strategy,
    params: &ProblemParams,
    targets: &[f64],
    streams: u64,
    master_seed: u64,
) -> Result<PrivacyReport> {
    let mut report = PrivacyReport { min_covering: usize::MAX, checked: 0, witnesses: Vec::new() };
    for &x in targets {
        report = report.merge(verify_target(strategy, params, x, streams, master_seed)?);
    }
    Ok(report)
}

/// [`verify_det_privacy`] for a single target.
pub fn verify_target(strategy: Strategy, params: &ProblemParams, target: f64, streams: u64, master_seed: u64) -> Result<PrivacyReport> {
    let mut report = PrivacyReport { min_covering: usize::MAX, checked: 0, witnesses: Vec::new() };
    let streams = if strategy.uses_coins() { streams.max(1) } else { 1 };
    for s in 0..streams {
        let (c, _) = covering_after_run(strategy, params, target, SeedSpec::new(master_seed, s))?;
        report.checked += 1;
        report.min_covering = report.min_covering.min(c);
        if c < params.l as usize {
            report.witnesses.push((target, s, c));
        }
    }
    Ok(report)
}

/// Wilson score interval for `hits` successes out of `trials`.
pub fn wilson(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BreachReport {
    pub adversary: &'static str,
    pub trials: u64,
    pub hits: u64,
    pub rate: f64,
    pub ci95: (f64, f64),
}

impl BreachReport {
    pub fn new(adversary: &'static str, hits: u64, trials: u64) -> Self {
        let rate = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
        BreachReport { adversary, trials, hits, rate, ci95: wilson(hits, trials, 1.96) }
    }
}

/// Fraction of `trials` Bayesian episodes in which `adversary` lands within
/// `δ/2` of the target. Trial `i` uses `SeedSpec::new(master_seed, i)`.
///
/// Only the given attack is evaluated; a low rate certifies nothing about
/// attacks that were not tried.
pub fn estimate_breach(
    strategy: Strategy,
    adversary: &Adversary,
    params: &ProblemParams,
    trials: u64,
    master_seed: u64,
) -> Result<BreachReport> {
    let targets = bayes_targets(strategy, params);
    let adv = core::slice::from_ref(adversary);
    let mut hits = 0u64;
    for i in 0..trials {
        let out = run_trial(strategy, params, &targets, adv, SeedSpec::new(master_seed, i))?;
        hits += out.hits[0] as u64;
    }
    Ok(BreachReport::new(adversary.name(), hits, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::pow2;
    use crate::noiseless::Bisection;

    #[test]
    fn bisection_info_set_is_final_interval() {
        let eps = pow2(-6);
        let fresh = Bisection::new(eps);
        let mut s = fresh.clone();
        let spec = SeedSpec::new(0, 0);
        let x = 0.3;
        let t = drive(&mut s, x, NoiseModel::Noiseless, &mut spec.rng(Stream::Noise), &mut spec.rng(Stream::Coins));
        let set = information_set(&fresh, t.query_view()).unwrap();
        // The last response moves no later query, so it stays hidden.
        let last = s.interval();
        assert_eq!(set.components.len(), 1);
        assert_eq!(set.components[0].width(), 2.0 * last.width());
        assert!(set.components[0].lo <= last.lo && last.hi <= set.components[0].hi);
        assert!(set.contains(x));
        assert_eq!(set.covering_number(2.0 * eps), Ok(1));
    }

    #[test]
    fn mismatch() {
        let fresh = Bisection::new(0.25);
        assert_eq!(information_set(&fresh, &[0.3]), Err(Error::TranscriptMismatch));
    }

    #[test]
    fn wilson_contains_rate() {
        let (lo, hi) = wilson(25, 100, 1.96);
        assert!(lo < 0.25 && 0.25 < hi);
        assert_eq!(wilson(0, 10, 1.96).0, 0.0);
    }

    #[test]
    fn grid_endpoints() {
        let g = det_target_grid(0.25);
        assert_eq!(g.first(), Some(&0.0));
        assert_eq!(g.last(), Some(&1.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.len() >= 13);
    }
}
