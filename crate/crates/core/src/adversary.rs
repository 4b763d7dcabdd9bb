//! Estimators that see only the query sequence.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::math::floor_log2;
use crate::params::ProblemParams;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Adversary {
    /// The learner's last query.
    LastQuery,
    /// A uniformly chosen query.
    Proportional,
    /// A uniformly chosen query after discarding the first `K`.
    TruncatedProportional(usize),
    /// Uniform pick among the candidate cells of a replicated search, found
    /// from the translation structure of the last `clones` queries.
    CandidateIntervalMap { clones: usize },
    Histogram(HistogramAttack),
}

impl Adversary {
    pub fn name(&self) -> &'static str {
        match self {
            Adversary::LastQuery => "last",
            Adversary::Proportional => "prop",
            Adversary::TruncatedProportional(_) => "trunc",
            Adversary::CandidateIntervalMap { .. } => "map",
            Adversary::Histogram(_) => "hist",
        }
    }

    /// Estimate of the target. Every attack draws at most one value from `rng`.
    pub fn attack<R: Rng + ?Sized>(&self, queries: &[f64], rng: &mut R) -> Result<f64> {
        let n = queries.len();
        if n == 0 {
            return Err(Error::EmptyTranscript);
        }
        match self {
            Adversary::LastQuery => Ok(queries[n - 1]),
            Adversary::Proportional => Ok(queries[rng.gen_range(0..n)]),
            Adversary::TruncatedProportional(k) => {
                if *k >= n {
                    return Err(Error::InsufficientLength { truncate: *k, len: n });
                }
                Ok(queries[rng.gen_range(*k..n)])
            }
            Adversary::CandidateIntervalMap { clones } => {
                let batch = clone_batch(queries, *clones)?;
                // Each query of the last batch splits the final candidate cell
                // around it in half, so it is that cell's center.
                Ok(batch[rng.gen_range(0..batch.len())])
            }
            Adversary::Histogram(h) => Ok(h.estimate(queries)),
        }
    }
}

/// `⌊log₂ 1/(Lδ)⌋`: the prefix a learner can spend before it must hide anything.
pub fn default_truncation(params: &ProblemParams) -> usize {
    floor_log2(1.0 / (params.l as f64 * params.delta)).max(0) as usize
}

const TRANSLATION_TOL: f64 = 1e-12;

fn equal_gaps(batch: &[f64]) -> Option<Vec<f64>> {
    let gaps: Vec<f64> = batch.windows(2).map(|w| w[1] - w[0]).collect();
    let g0 = *gaps.first()?;
    if g0 <= 0.0 || gaps.iter().any(|g| (g - g0).abs() > TRANSLATION_TOL) {
        return None;
    }
    Some(gaps)
}

/// The last `clones` queries, provided they form an evenly spaced batch and,
/// when there is room, the batch before them has the same spacing.
fn clone_batch(queries: &[f64], clones: usize) -> Result<&[f64]> {
    let n = queries.len();
    let fail = Error::NoCloneStructure { clones };
    if clones < 2 || n < clones {
        return Err(fail);
    }
    let last = &queries[n - clones..];
    let gaps = equal_gaps(last).ok_or(fail.clone())?;
    if n >= 2 * clones {
        let prev = equal_gaps(&queries[n - 2 * clones..n - clones]).ok_or(fail.clone())?;
        if (prev[0] - gaps[0]).abs() > TRANSLATION_TOL {
            return Err(fail);
        }
    }
    Ok(last)
}

/// Empirical `X* | transcript` histograms keyed by the quantized first
/// `prefix` queries, trained on simulated runs.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramAttack {
    bins: u32,
    prefix: usize,
    window: u32,
    table: BTreeMap<Vec<u32>, Vec<u32>>,
    global: Vec<u32>,
}

impl HistogramAttack {
    /// `window` bins of width `1/bins` make up one `δ`-window.
    pub fn new(bins: u32, prefix: usize, delta: f64) -> Self {
        assert!(bins >= 1);
        let window = (libm::floor(delta * bins as f64 + 1e-9) as u32).clamp(1, bins);
        HistogramAttack { bins, prefix, window, table: BTreeMap::new(), global: vec![0; bins as usize] }
    }

    fn bin(&self, x: f64) -> u32 {
        (libm::floor(x * self.bins as f64).max(0.0) as u32).min(self.bins - 1)
    }

    fn key(&self, queries: &[f64]) -> Vec<u32> {
        queries.iter().take(self.prefix).map(|&q| self.bin(q)).collect()
    }

    pub fn train(&mut self, queries: &[f64], target: f64) {
        let b = self.bin(target) as usize;
        let key = self.key(queries);
        let bins = self.bins as usize;
        self.table.entry(key).or_insert_with(|| vec![0; bins])[b] += 1;
        self.global[b] += 1;
    }

    /// Number of distinct transcript keys seen in training.
    pub fn keys(&self) -> usize {
        self.table.len()
    }

    /// Center of the `δ`-window with the largest trained mass.
    pub fn estimate(&self, queries: &[f64]) -> f64 {
        let hist = self.table.get(&self.key(queries)).unwrap_or(&self.global);
        let w = self.window as usize;
        let mut sum: u64 = hist[..w].iter().map(|&c| c as u64).sum();
        let mut best = (sum, 0usize);
        for start in 1..=hist.len() - w {
            sum = sum + hist[start + w - 1] as u64 - hist[start - 1] as u64;
            if sum > best.0 {
                best = (sum, start);
            }
        }
        (best.1 as f64 + w as f64 / 2.0) / self.bins as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::pow2;
    use crate::{SeedSpec, Stream};

    #[test]
    fn truncation_examples() {
        assert_eq!(default_truncation(&ProblemParams::noiseless(pow2(-10), pow2(-6), 4)), 4);
        assert_eq!(default_truncation(&ProblemParams::noiseless(0.01, 0.25, 4)), 0);
        assert_eq!(default_truncation(&ProblemParams::noiseless(pow2(-10), pow2(-6), 3)), 4);
    }

    #[test]
    fn truncated_breach_enumeration() {
        let qs: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
        let (x, delta) = (0.93, 0.2);
        let mut rng = SeedSpec::new(5, 0).rng(Stream::Adversary);
        let n = 60_000;
        let hits = (0..n)
            .filter(|_| {
                let est = Adversary::TruncatedProportional(4).attack(&qs, &mut rng).unwrap();
                (est - x).abs() <= delta / 2.0
            })
            .count();
        let rate = hits as f64 / n as f64;
        assert!((rate - 2.0 / 6.0).abs() < 0.01, "{rate}");
    }

    #[test]
    fn errors() {
        let mut rng = SeedSpec::new(0, 0).rng(Stream::Adversary);
        assert_eq!(Adversary::LastQuery.attack(&[], &mut rng), Err(Error::EmptyTranscript));
        assert_eq!(
            Adversary::TruncatedProportional(3).attack(&[0.1, 0.2, 0.3], &mut rng),
            Err(Error::InsufficientLength { truncate: 3, len: 3 })
        );
        assert_eq!(
            Adversary::CandidateIntervalMap { clones: 2 }.attack(&[0.5, 0.25, 0.75, 0.125, 0.375], &mut rng),
            Err(Error::NoCloneStructure { clones: 2 })
        );
    }

    #[test]
    fn map_picks_from_last_batch() {
        let qs = [0.5, 0.625, 0.75, 0.875, 0.5625, 0.6875, 0.8125, 0.9375, 0.53125, 0.65625, 0.78125, 0.90625];
        let mut rng = SeedSpec::new(0, 0).rng(Stream::Adversary);
        for _ in 0..20 {
            let x = Adversary::CandidateIntervalMap { clones: 4 }.attack(&qs, &mut rng).unwrap();
            assert!(qs[8..].contains(&x));
        }
    }

    #[test]
    fn histogram_window() {
        let mut h = HistogramAttack::new(100, 1, 0.1);
        for i in 0..100 {
            h.train(&[0.5], 0.3 + 0.001 * (i % 50) as f64);
        }
        h.train(&[0.25], 0.9);
        let est = h.estimate(&[0.5]);
        assert!((est - 0.35).abs() <= 0.05 + 1e-12, "{est}");
        assert_eq!(h.estimate(&[0.25]), h.estimate(&[0.25]));
        assert_eq!(h.keys(), 2);
    }
}
