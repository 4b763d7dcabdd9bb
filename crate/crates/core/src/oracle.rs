use alloc::vec::Vec;

use rand::Rng;

/// How the target is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetModel {
    /// Independent `Unif[0,1]` coordinates.
    BayesUniform { dim: u32 },
    /// A fixed point of `[0,1]^d`.
    Fixed(Vec<f64>),
}

impl TargetModel {
    pub fn dim(&self) -> u32 {
        match self {
            TargetModel::BayesUniform { dim } => *dim,
            TargetModel::Fixed(v) => v.len() as u32,
        }
    }
}

/// Response channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Noiseless,
    /// Each response is correct with probability `p`, independently.
    Flip(f64),
}

/// Response to "is `target ≥ query`?".
///
/// Only the noisy channel draws from `rng`, one uniform per call.
pub fn answer<R: Rng + ?Sized>(query: f64, target: f64, noise: NoiseModel, rng: &mut R) -> bool {
    let truth = target >= query;
    match noise {
        NoiseModel::Noiseless => truth,
        NoiseModel::Flip(p) => {
            if rng.gen_bool(p) {
                truth
            } else {
                !truth
            }
        }
    }
}

pub fn sample_target<R: Rng + ?Sized>(model: &TargetModel, rng: &mut R) -> Vec<f64> {
    match model {
        TargetModel::BayesUniform { dim } => (0..*dim).map(|_| rng.gen::<f64>()).collect(),
        TargetModel::Fixed(v) => v.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{SeedSpec, Stream};
    use alloc::vec;

    #[test]
    fn boundary_answers_one() {
        let mut rng = SeedSpec::new(0, 0).rng(Stream::Noise);
        assert!(answer(0.5, 0.5, NoiseModel::Noiseless, &mut rng));
        assert!(!answer(0.7, 0.5, NoiseModel::Noiseless, &mut rng));
    }

    #[test]
    fn flip_rate() {
        let mut rng = SeedSpec::new(1, 0).rng(Stream::Noise);
        let n = 100_000;
        let zeros = (0..n).filter(|_| !answer(0.7, 0.5, NoiseModel::Flip(0.8), &mut rng)).count();
        let freq = zeros as f64 / n as f64;
        assert!((freq - 0.8).abs() < 0.01, "{freq}");
    }

    #[test]
    fn fixed_target() {
        let mut rng = SeedSpec::new(0, 0).rng(Stream::Target);
        assert_eq!(sample_target(&TargetModel::Fixed(vec![0.25]), &mut rng), vec![0.25]);
    }

    #[test]
    fn uniform_ks() {
        let mut rng = SeedSpec::new(2, 0).rng(Stream::Target);
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| sample_target(&TargetModel::BayesUniform { dim: 1 }, &mut rng)[0])
            .collect();
        xs.sort_by(f64::total_cmp);
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d = d.max((x - lo).abs()).max((hi - x).abs());
        }
        // 1% critical value of the one-sample KS statistic.
        let crit = 1.628 / libm::sqrt(n as f64);
        assert!(d < crit, "KS distance {d} ≥ {crit}");
    }

    #[test]
    fn uniform_2d_uncorrelated() {
        let mut rng = SeedSpec::new(3, 0).rng(Stream::Target);
        let n = 100_000;
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let v = sample_target(&TargetModel::BayesUniform { dim: 2 }, &mut rng);
            sx += v[0];
            sy += v[1];
            sxx += v[0] * v[0];
            syy += v[1] * v[1];
            sxy += v[0] * v[1];
        }
        let nf = n as f64;
        let cov = sxy / nf - (sx / nf) * (sy / nf);
        let vx = sxx / nf - (sx / nf) * (sx / nf);
        let vy = syy / nf - (sy / nf) * (sy / nf);
        let rho = cov / libm::sqrt(vx * vy);
        assert!(rho.abs() < 0.02, "{rho}");
    }

    #[test]
    fn noiseless_monotone_in_query() {
        let mut rng = SeedSpec::new(0, 0).rng(Stream::Noise);
        let target = 0.37;
        let mut prev = true;
        for i in 0..=64 {
            let r = answer(i as f64 / 64.0, target, NoiseModel::Noiseless, &mut rng);
            assert!(prev || !r);
            prev = r;
        }
    }
}
