//! Closed-form query-complexity bounds.
//!
//! All logarithms are base 2. Lower bounds are returned raw and can be
//! negative at extreme parameters.

use alloc::vec::Vec;

use crate::math::{ceil_log2, floor_log2, log2, pow2, LOG2_E};
use crate::params::{ProblemParams, Setting};
use crate::{Error, Result};

/// Channel constants `c₁..c₄` for correctness probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConstants {
    /// `D(Bern(1−p) ‖ Bern(p))`.
    pub c1: f64,
    /// `h(1/2) − h(p)`.
    pub c2: f64,
    /// `(p − 1/2)² log e`.
    pub c3: f64,
    /// `D(Bern(1/2) ‖ Bern(p))`.
    pub c4: f64,
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * log2(x) } else { 0.0 };
    term(p) + term(1.0 - p)
}

impl NoiseConstants {
    pub fn new(p: f64) -> Self {
        let q = 1.0 - p;
        NoiseConstants {
            c1: q * log2(q / p) + p * log2(p / q),
            c2: 1.0 - binary_entropy(p),
            c3: (p - 0.5) * (p - 0.5) * LOG2_E,
            c4: 0.5 * (log2(1.0 / (2.0 * p)) + log2(1.0 / (2.0 * q))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    UpperNew,
    LowerNew,
    UpperPrior,
    LowerPrior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub setting: Setting,
    pub kind: BoundKind,
    pub value: f64,
}

pub fn eval_bound(setting: Setting, kind: BoundKind, params: &ProblemParams) -> Result<BoundValue> {
    let p = params.validate(setting)?;
    let value = match setting {
        Setting::BayesNoiseless => bayes(kind, &p)?,
        Setting::Deterministic => det(kind, &p),
        Setting::BayesD => bayes_d(kind, &p)?,
        Setting::DeterministicD => det_d(kind, &p)?,
        Setting::BayesNoisyAvg | Setting::BayesNoisyWhp => noisy(setting, kind, &p)?,
    };
    Ok(BoundValue { setting, kind, value })
}

fn bayes(kind: BoundKind, p: &ProblemParams) -> Result<f64> {
    let (eps, delta, l) = (p.epsilon, p.delta, p.l as f64);
    let head = floor_log2(1.0 / (l * delta)) as f64;
    Ok(match kind {
        BoundKind::UpperNew => head + l * (ceil_log2(delta / eps) as f64 + 2.0) - 1.0,
        BoundKind::LowerNew => head + l * (log2(delta / eps) - 2.0) - 1.0,
        BoundKind::UpperPrior => l * ceil_log2(1.0 / (l * eps)) as f64 + l - 1.0,
        BoundKind::LowerPrior => {
            let r = log2(delta / eps);
            if r <= 1.0 {
                return Err(Error::UndefinedBound("log log(delta/eps) needs log(delta/eps) > 1"));
            }
            l * (r - 3.0 * log2(r) - 1.0)
        }
    })
}

fn det(kind: BoundKind, p: &ProblemParams) -> f64 {
    let (eps, delta, l) = (p.epsilon, p.delta, p.l as f64);
    let a = ceil_log2(1.0 / eps) as f64;
    let b = ceil_log2(delta / eps) as f64;
    match kind {
        BoundKind::UpperNew => (a + l).max(b + 2.0 * l),
        BoundKind::LowerNew => (a + l - 8.0).max(b + 2.0 * l - 4.0),
        BoundKind::UpperPrior => ceil_log2(1.0 / (l * eps)) as f64 + 2.0 * l,
        BoundKind::LowerPrior => a.max(b + 2.0 * l - 4.0),
    }
}

fn bayes_d(kind: BoundKind, p: &ProblemParams) -> Result<f64> {
    let (eps, delta, d) = (p.epsilon, p.delta, p.d as f64);
    let g = p.per_dim_l() as f64;
    let gamma = libm::pow(p.l as f64, 1.0 / d);
    match kind {
        BoundKind::UpperNew => {
            Ok(d * (floor_log2(1.0 / (g * delta)) as f64 + g * (ceil_log2(delta / eps) as f64 + 2.0) - 1.0))
        }
        BoundKind::LowerNew => {
            Ok(d * (floor_log2(1.0 / (gamma * delta)) as f64 + gamma * (log2(delta / eps) - 2.0) - 1.0))
        }
        _ => Err(Error::UndefinedBound("no prior bound in d dimensions")),
    }
}

fn det_d(kind: BoundKind, p: &ProblemParams) -> Result<f64> {
    let (eps, delta, d) = (p.epsilon, p.delta, p.d as f64);
    let g = p.per_dim_l();
    let gamma = libm::pow(p.l as f64, 1.0 / d);
    let top = pow2(-(g as i32)).max(delta);
    match kind {
        BoundKind::UpperNew => Ok(d * (2.0 * g as f64 + ceil_log2(top / eps) as f64 + 1.0)),
        BoundKind::LowerNew => Ok(d * (2.0 * gamma + log2(top / eps) - 8.0)),
        _ => Err(Error::UndefinedBound("no prior bound in d dimensions")),
    }
}

/// The terms whose maximum forms the noisy lower bound.
pub fn noisy_lower_terms(setting: Setting, p: &ProblemParams) -> Vec<f64> {
    let c = NoiseConstants::new(p.p.unwrap_or(0.75));
    let (eps, delta, l) = (p.epsilon, p.delta, p.l as f64);
    match setting {
        Setting::BayesNoisyWhp => {
            let m = p.m.unwrap_or(2.0);
            alloc::vec![
                l / (2.0 * c.c2) * log2(delta / (8.0 * eps)),
                1.0 / (2.0 * c.c2) * log2(1.0 / (4.0 * eps)),
                l / (2.0 * c.c1) * log2(m / 8.0),
            ]
        }
        _ => alloc::vec![
            1.0 / (2.0 * c.c2) * l * log2(delta / (16.0 * eps)),
            1.0 / (2.0 * c.c2) * log2(1.0 / (8.0 * eps)),
        ],
    }
}

/// Average of the lower-bound terms: a lower envelope of their maximum that
/// is linear in the two logarithmic quantities.
pub fn noisy_lower_envelope(setting: Setting, p: &ProblemParams) -> f64 {
    let t = noisy_lower_terms(setting, p);
    t.iter().sum::<f64>() / t.len() as f64
}

fn noisy(setting: Setting, kind: BoundKind, p: &ProblemParams) -> Result<f64> {
    let c = NoiseConstants::new(p.p.unwrap());
    let (eps, delta, l) = (p.epsilon, p.delta, p.l as f64);
    match (setting, kind) {
        (Setting::BayesNoisyAvg, BoundKind::UpperNew) => {
            Ok((14.0 / c.c3 + 7.0 / c.c4) * (log2(1.0 / eps) + l * log2(64.0 * delta / eps)))
        }
        (Setting::BayesNoisyWhp, BoundKind::UpperNew) => {
            let m = p.m.unwrap();
            Ok((8.0 / c.c3 + 7.0 / c.c4) * (log2(1.0 / eps) + l * log2(12.0 * m * delta / eps)))
        }
        (_, BoundKind::LowerNew) => Ok(noisy_lower_terms(setting, p).into_iter().fold(f64::NEG_INFINITY, f64::max)),
        _ => Err(Error::UndefinedBound("no prior bound for noisy responses")),
    }
}

/// `δ = coef · ε^exp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaLink {
    pub coef: f64,
    pub exp: f64,
}

impl DeltaLink {
    pub fn delta(&self, eps: f64) -> f64 {
        self.coef * libm::pow(eps, self.exp)
    }

    /// The `ε` at which `δ` reaches `1/L`.
    pub fn cutoff(&self, l: u32) -> f64 {
        libm::pow(1.0 / (l as f64 * self.coef), 1.0 / self.exp)
    }
}

/// One row of a bound curve. Values are `None` where the formula is
/// undefined; `valid` is false when the point is outside the regime.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub eps: f64,
    pub delta: f64,
    pub valid: bool,
    pub upper_new: Option<f64>,
    pub lower_new: Option<f64>,
    pub upper_prior: Option<f64>,
    pub lower_prior: Option<f64>,
}

/// Evaluates all four bounds along `eps_values` with `δ` tied to `ε` by `link`.
pub fn bound_curve(setting: Setting, base: &ProblemParams, link: DeltaLink, eps_values: &[f64]) -> Vec<CurvePoint> {
    let cap = 1.0 / base.l as f64;
    eps_values
        .iter()
        .map(|&eps| {
            let mut delta = link.delta(eps);
            // The cutoff point itself lands a few ulps off 1/L.
            if (delta - cap).abs() <= 4.0 * f64::EPSILON * cap {
                delta = cap;
            }
            let p = ProblemParams { epsilon: eps, delta, ..*base };
            let get = |k| eval_bound(setting, k, &p).ok().map(|b| b.value);
            let valid = p.validate(setting).is_ok();
            CurvePoint {
                eps,
                delta,
                valid,
                upper_new: get(BoundKind::UpperNew),
                lower_new: get(BoundKind::LowerNew),
                upper_prior: get(BoundKind::UpperPrior),
                lower_prior: get(BoundKind::LowerPrior),
            }
        })
        .collect()
}

/// `n` log-spaced points from `from` to `to`, both included.
pub fn geometric_points(from: f64, to: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return alloc::vec![from];
    }
    let (a, b) = (libm::log(from), libm::log(to));
    (0..n)
        .map(|i| match i {
            0 => from,
            i if i == n - 1 => to,
            i => libm::exp(a + (b - a) * i as f64 / (n - 1) as f64),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(s: Setting, k: BoundKind, p: &ProblemParams) -> f64 {
        eval_bound(s, k, p).unwrap().value
    }

    #[test]
    fn bayes_upper_27() {
        let p = ProblemParams::noiseless(pow2(-10), pow2(-6), 4);
        assert_eq!(value(Setting::BayesNoiseless, BoundKind::UpperNew, &p), 27.0);
    }

    #[test]
    fn det_examples() {
        let p = ProblemParams::noiseless(pow2(-10), pow2(-5), 3);
        assert_eq!(value(Setting::Deterministic, BoundKind::UpperNew, &p), 13.0);
        assert_eq!(value(Setting::Deterministic, BoundKind::LowerNew, &p), 7.0);
    }

    #[test]
    fn constants_at_08() {
        let c = NoiseConstants::new(0.8);
        assert!((c.c3 - 0.09 * LOG2_E).abs() < 1e-15);
        assert!((c.c3 - 0.12984).abs() < 1e-5);
        assert!((c.c4 - 0.32193).abs() < 1e-5);
        assert!(c.c1 > 0.0 && c.c2 > 0.0);
    }

    #[test]
    fn constants_vanish_quadratically() {
        for h in [1e-2, 1e-3] {
            let c = NoiseConstants::new(0.5 + h);
            for v in [c.c1, c.c2, c.c3, c.c4] {
                let ratio = v / (h * h);
                assert!(ratio > 0.5 && ratio < 16.0, "{ratio}");
            }
        }
    }

    #[test]
    fn ddim_upper() {
        let p = ProblemParams::noiseless(pow2(-10), pow2(-6), 4).with_dim(2);
        assert_eq!(value(Setting::BayesD, BoundKind::UpperNew, &p), 2.0 * (5.0 + 2.0 * 6.0 - 1.0));
        let p = ProblemParams::noiseless(pow2(-10), pow2(-6), 8).with_dim(3);
        assert_eq!(value(Setting::DeterministicD, BoundKind::UpperNew, &p), 3.0 * (4.0 + 8.0 + 1.0));
    }

    #[test]
    fn prior_lower_undefined_near_eps() {
        let p = ProblemParams::noiseless(0.125, 0.25, 4);
        assert_eq!(
            eval_bound(Setting::BayesNoiseless, BoundKind::LowerPrior, &p).unwrap_err(),
            Error::UndefinedBound("log log(delta/eps) needs log(delta/eps) > 1")
        );
    }

    #[test]
    fn cutoff_fig1() {
        let link = DeltaLink { coef: 4.0, exp: 0.5 };
        let c = link.cutoff(15);
        assert!((c - 1.0 / 3600.0).abs() < 1e-18);
        let pts = bound_curve(Setting::BayesNoiseless, &ProblemParams::noiseless(1.0, 1.0, 15), link, &[c, c * 1.01]);
        assert!(pts[0].valid);
        assert!(!pts[1].valid);
    }

    #[test]
    fn regime_checked() {
        let p = ProblemParams::noiseless(0.3, 0.4, 3);
        assert!(matches!(eval_bound(Setting::BayesNoiseless, BoundKind::UpperNew, &p), Err(Error::RegimeViolation(_))));
    }

    #[test]
    fn noisy_max_dominates_average() {
        let p = ProblemParams::noiseless(pow2(-12), pow2(-4), 4).with_noise(0.8).with_confidence(16.0);
        for s in [Setting::BayesNoisyAvg, Setting::BayesNoisyWhp] {
            assert!(value(s, BoundKind::LowerNew, &p) >= noisy_lower_envelope(s, &p));
            assert!(value(s, BoundKind::UpperNew, &p) > value(s, BoundKind::LowerNew, &p));
        }
    }
}
