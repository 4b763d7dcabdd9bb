//! Strategy descriptors: one value naming a learner strategy, able to build a
//! fresh session and to state the closed-form query count it must hit.

use alloc::format;

use crate::bounds::{eval_bound, BoundKind};
use crate::math::{halvings_to, pow2};
use crate::noiseless::{choose_guess_plan, Bisection, GridSearch, LargeDelta, Multistage, MultistageConfig, SmallDelta};
use crate::noisy::{NoisyMultistage, NoisyStageConfig};
use crate::params::{ProblemParams, Setting};
use crate::seed::{SeedSpec, Stream};
use crate::session::{Session, Step};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Bisection,
    Grid,
    Replicated,
    /// Staged Bayesian strategy.
    Alg1,
    /// Guesses at bisection midpoints (`δ ≤ 2^{-L}`).
    Alg2,
    /// Guess at 0, bisection guesses, grid guesses (`δ > 2^{-L}`).
    Alg3,
    /// `Alg2` or `Alg3`, whichever fits `δ`.
    Det,
    NoisyAvg,
    NoisyWhp,
    /// Per-coordinate staged Bayesian strategy.
    Alg1D,
    /// Per-coordinate deterministic guess strategy.
    DetD,
}

impl Strategy {
    pub const ALL: [Strategy; 11] = [
        Strategy::Bisection,
        Strategy::Grid,
        Strategy::Replicated,
        Strategy::Alg1,
        Strategy::Alg2,
        Strategy::Alg3,
        Strategy::Det,
        Strategy::NoisyAvg,
        Strategy::NoisyWhp,
        Strategy::Alg1D,
        Strategy::DetD,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Strategy::Bisection => "bisection",
            Strategy::Grid => "grid",
            Strategy::Replicated => "replicated",
            Strategy::Alg1 => "alg1",
            Strategy::Alg2 => "alg2",
            Strategy::Alg3 => "alg3",
            Strategy::Det => "det",
            Strategy::NoisyAvg => "noisy-avg",
            Strategy::NoisyWhp => "noisy-whp",
            Strategy::Alg1D => "alg1-d",
            Strategy::DetD => "det-d",
        }
    }

    pub fn from_id(id: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|s| s.id() == id)
    }

    /// Setting whose regime the parameters must satisfy.
    pub fn setting(self) -> Setting {
        match self {
            Strategy::Bisection | Strategy::Grid | Strategy::Replicated | Strategy::Alg1 => Setting::BayesNoiseless,
            Strategy::Alg2 | Strategy::Alg3 | Strategy::Det => Setting::Deterministic,
            Strategy::NoisyAvg => Setting::BayesNoisyAvg,
            Strategy::NoisyWhp => Setting::BayesNoisyWhp,
            Strategy::Alg1D => Setting::BayesD,
            Strategy::DetD => Setting::DeterministicD,
        }
    }

    pub fn is_noisy(self) -> bool {
        self.setting().is_noisy()
    }

    pub fn is_multidim(self) -> bool {
        self.setting().is_multidim()
    }

    pub fn uses_coins(self) -> bool {
        matches!(self, Strategy::Alg2 | Strategy::Alg3 | Strategy::Det | Strategy::DetD)
    }

    /// Fresh session for a 1-D strategy.
    pub fn session(self, params: &ProblemParams, spec: SeedSpec) -> Result<AnySession> {
        let p = params.validate(self.setting())?;
        Ok(match self {
            Strategy::Bisection => AnySession::Bisection(Bisection::new(p.epsilon)),
            Strategy::Grid => AnySession::Grid(GridSearch::new(p.epsilon)),
            Strategy::Replicated => AnySession::Multistage(Multistage::new(MultistageConfig::replicated(&p))),
            Strategy::Alg1 => AnySession::Multistage(Multistage::new(MultistageConfig::bayes(&p)?)),
            Strategy::Alg2 | Strategy::Alg3 | Strategy::Det => det_session(self, p.epsilon, p.delta, p.l)?,
            Strategy::NoisyAvg => {
                AnySession::Noisy(NoisyMultistage::new(NoisyStageConfig::avg(&p)?, &p, spec.rng(Stream::Bz)))
            }
            Strategy::NoisyWhp => {
                AnySession::Noisy(NoisyMultistage::new(NoisyStageConfig::whp(&p)?, &p, spec.rng(Stream::Bz)))
            }
            Strategy::Alg1D | Strategy::DetD => return self.coordinate_session(&p, spec, 0),
        })
    }

    /// Fresh session for coordinate `coord` of a `d`-dimensional strategy. The
    /// per-coordinate privacy level is `⌈L^{1/d}⌉`.
    pub fn coordinate_session(self, params: &ProblemParams, _spec: SeedSpec, _coord: u32) -> Result<AnySession> {
        let p = params.validate(self.setting())?;
        let g = p.per_dim_l();
        match self {
            Strategy::Alg1D => Ok(AnySession::Multistage(Multistage::new(MultistageConfig::tight(p.epsilon, p.delta, g)))),
            Strategy::DetD => det_session(Strategy::Det, p.epsilon, p.delta, g),
            _ => Err(Error::RegimeViolation(format!("{} is not a d-dimensional strategy", self.id()))),
        }
    }

    /// Whether the guess-at-0 variant runs, which reports one query less than
    /// it submits.
    fn skips_leading_query(self, params: &ProblemParams) -> bool {
        match self {
            Strategy::Alg3 => true,
            Strategy::Det => params.delta > pow2(-(params.l as i32)),
            _ => false,
        }
    }

    /// Query count as reported for complexity purposes.
    pub fn reported_queries(self, params: &ProblemParams, submitted: u64) -> u64 {
        if self.skips_leading_query(params) {
            submitted.saturating_sub(1)
        } else {
            submitted
        }
    }

    /// The exact reported query count, identical on every run.
    pub fn exact_queries(self, params: &ProblemParams) -> Result<u64> {
        let p = params.validate(self.setting())?;
        let (eps, delta, l) = (p.epsilon, p.delta, p.l);
        let det_total = |eps: f64, delta: f64, l: u32| -> Result<u64> {
            if delta <= pow2(-(l as i32)) {
                Ok(SmallDelta::total_queries(eps, l))
            } else {
                Ok(LargeDelta::total_queries(eps, l, choose_guess_plan(delta, l)?))
            }
        };
        let submitted = match self {
            Strategy::Bisection => halvings_to(1.0, eps) as u64,
            Strategy::Grid => GridSearch::new(eps).points() as u64,
            Strategy::Replicated => MultistageConfig::replicated(&p).total_queries(),
            Strategy::Alg1 => MultistageConfig::bayes(&p)?.total_queries(),
            Strategy::Alg2 => {
                check_small(delta, l)?;
                SmallDelta::total_queries(eps, l)
            }
            Strategy::Alg3 => LargeDelta::total_queries(eps, l, choose_guess_plan(delta, l)?),
            Strategy::Det => det_total(eps, delta, l)?,
            Strategy::NoisyAvg => NoisyStageConfig::avg(&p)?.total_queries(),
            Strategy::NoisyWhp => NoisyStageConfig::whp(&p)?.total_queries(),
            Strategy::Alg1D => p.d as u64 * MultistageConfig::tight(eps, delta, p.per_dim_l()).total_queries(),
            Strategy::DetD => p.d as u64 * det_total(eps, delta, p.per_dim_l())?,
        };
        Ok(self.reported_queries(&p, submitted))
    }

    /// Upper bound the reported count is checked against, if one applies.
    pub fn bound_upper(self, params: &ProblemParams) -> Option<f64> {
        let bound = |s, k| eval_bound(s, k, params).ok().map(|b| b.value);
        match self {
            Strategy::Bisection => Some(halvings_to(1.0, params.epsilon) as f64),
            Strategy::Grid => Some(GridSearch::new(params.epsilon).points() as f64),
            Strategy::Replicated => bound(Setting::BayesNoiseless, BoundKind::UpperPrior),
            _ => bound(self.setting(), BoundKind::UpperNew),
        }
    }

    /// Lower bound for the setting the strategy solves, if one applies.
    pub fn bound_lower(self, params: &ProblemParams) -> Option<f64> {
        match self {
            Strategy::Bisection | Strategy::Grid => None,
            _ => eval_bound(self.setting(), BoundKind::LowerNew, params).ok().map(|b| b.value),
        }
    }
}

fn check_small(delta: f64, l: u32) -> Result<()> {
    if delta > pow2(-(l as i32)) {
        return Err(Error::RegimeViolation(format!("delta ≤ 2^-{l} fails: {delta}")));
    }
    Ok(())
}

fn det_session(which: Strategy, eps: f64, delta: f64, l: u32) -> Result<AnySession> {
    let small = delta <= pow2(-(l as i32));
    match which {
        Strategy::Alg2 => {
            check_small(delta, l)?;
            Ok(AnySession::Small(SmallDelta::new(eps, l)))
        }
        Strategy::Det if small => Ok(AnySession::Small(SmallDelta::new(eps, l))),
        _ => Ok(AnySession::Large(LargeDelta::new(eps, l, choose_guess_plan(delta, l)?))),
    }
}

/// Any of the concrete sessions behind one type.
#[derive(Debug, Clone)]
pub enum AnySession {
    Bisection(Bisection),
    Grid(GridSearch),
    Multistage(Multistage),
    Small(SmallDelta),
    Large(LargeDelta),
    Noisy(NoisyMultistage),
}

macro_rules! each {
    ($self:ident, $s:ident => $e:expr) => {
        match $self {
            AnySession::Bisection($s) => $e,
            AnySession::Grid($s) => $e,
            AnySession::Multistage($s) => $e,
            AnySession::Small($s) => $e,
            AnySession::Large($s) => $e,
            AnySession::Noisy($s) => $e,
        }
    };
}

impl Session for AnySession {
    fn step(&mut self) -> Step {
        each!(self, s => s.step())
    }

    fn respond(&mut self, response: bool) {
        each!(self, s => s.respond(response))
    }

    fn coin(&mut self, value: u32) {
        each!(self, s => s.coin(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(Strategy::from_id(s.id()), Some(s));
        }
        assert_eq!(Strategy::from_id("nope"), None);
    }

    #[test]
    fn exact_counts() {
        let p = ProblemParams::noiseless(pow2(-10), pow2(-6), 4);
        assert_eq!(Strategy::Alg1.exact_queries(&p), Ok(27));
        let p = ProblemParams::noiseless(pow2(-10), pow2(-5), 3);
        assert_eq!(Strategy::Alg2.exact_queries(&p), Ok(13));
        assert_eq!(Strategy::Det.exact_queries(&p), Ok(13));
        let p = ProblemParams::noiseless(pow2(-10), 0.03, 7);
        assert_eq!(Strategy::Alg3.exact_queries(&p), Ok(19));
        assert_eq!(Strategy::Alg3.bound_upper(&p), Some(19.0));
        let p = ProblemParams::noiseless(pow2(-10), pow2(-6), 4).with_dim(2);
        assert_eq!(Strategy::Alg1D.exact_queries(&p), Ok(28));
    }

    #[test]
    fn alg2_needs_small_delta() {
        let p = ProblemParams::noiseless(pow2(-10), 0.03, 7);
        assert!(Strategy::Alg2.session(&p, SeedSpec::new(0, 0)).is_err());
        let p = ProblemParams::noiseless(pow2(-10), pow2(-5), 3);
        assert!(Strategy::Alg3.session(&p, SeedSpec::new(0, 0)).is_err());
    }
}
