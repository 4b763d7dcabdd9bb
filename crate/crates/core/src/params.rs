use alloc::format;

use crate::{Error, Result};

/// Which problem formulation a parameter set is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    BayesNoiseless,
    Deterministic,
    BayesNoisyAvg,
    BayesNoisyWhp,
    BayesD,
    DeterministicD,
}

impl Setting {
    pub const ALL: [Setting; 6] = [
        Setting::BayesNoiseless,
        Setting::Deterministic,
        Setting::BayesNoisyAvg,
        Setting::BayesNoisyWhp,
        Setting::BayesD,
        Setting::DeterministicD,
    ];

    pub fn from_name(name: &str) -> Option<Setting> {
        Setting::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn is_noisy(self) -> bool {
        matches!(self, Setting::BayesNoisyAvg | Setting::BayesNoisyWhp)
    }

    pub fn is_multidim(self) -> bool {
        matches!(self, Setting::BayesD | Setting::DeterministicD)
    }

    pub fn name(self) -> &'static str {
        match self {
            Setting::BayesNoiseless => "bayes",
            Setting::Deterministic => "det",
            Setting::BayesNoisyAvg => "noisy-avg",
            Setting::BayesNoisyWhp => "noisy-whp",
            Setting::BayesD => "bayes-d",
            Setting::DeterministicD => "det-d",
        }
    }
}

/// Accuracy, privacy and noise parameters of one problem instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    /// Learner accuracy width: the estimate must land within `epsilon / 2`.
    pub epsilon: f64,
    /// Adversary accuracy width.
    pub delta: f64,
    /// Privacy level.
    pub l: u32,
    /// Probability that a response is correct; `None` means noiseless.
    pub p: Option<f64>,
    /// High-probability accuracy parameter: failure probability at most `1/M`.
    pub m: Option<f64>,
    /// Dimension.
    pub d: u32,
}

impl ProblemParams {
    pub fn noiseless(epsilon: f64, delta: f64, l: u32) -> Self {
        ProblemParams { epsilon, delta, l, p: None, m: None, d: 1 }
    }

    pub fn with_noise(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_confidence(mut self, m: f64) -> Self {
        self.m = Some(m);
        self
    }

    pub fn with_dim(mut self, d: u32) -> Self {
        self.d = d;
        self
    }

    /// `⌈L^{1/d}⌉`, computed exactly as the smallest integer `g` with `g^d ≥ L`.
    pub fn per_dim_l(&self) -> u32 {
        per_dim_l(self.l, self.d)
    }

    /// Checks the regime constraint of `setting` and returns the params unchanged.
    pub fn validate(self, setting: Setting) -> Result<Self> {
        let ProblemParams { epsilon, delta, l, .. } = self;
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::RegimeViolation(format!("epsilon = {epsilon} must be positive")));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::RegimeViolation(format!("delta = {delta} must be positive")));
        }
        if l < 2 {
            return Err(Error::RegimeViolation(format!("L = {l} must be at least 2")));
        }
        if setting.is_noisy() {
            let p = self.p.ok_or(Error::MissingField("p"))?;
            if !(p > 0.5 && p < 1.0) {
                return Err(Error::RegimeViolation(format!("p = {p} must lie in (1/2, 1)")));
            }
            if setting == Setting::BayesNoisyWhp {
                let m = self.m.ok_or(Error::MissingField("M"))?;
                if !(m >= 2.0) {
                    return Err(Error::RegimeViolation(format!("M = {m} must be at least 2")));
                }
            }
        }
        if setting.is_multidim() && self.d < 2 {
            return Err(Error::RegimeViolation(format!("d = {} must be at least 2", self.d)));
        }

        let (lower_factor, cap) = match setting {
            Setting::BayesNoiseless | Setting::Deterministic => (2.0, l),
            Setting::BayesNoisyAvg | Setting::BayesNoisyWhp => (4.0, l),
            Setting::BayesD | Setting::DeterministicD => (2.0, self.per_dim_l()),
        };
        if lower_factor * epsilon > delta {
            return Err(Error::RegimeViolation(format!(
                "{lower_factor}·epsilon ≤ delta fails: {} > {delta}",
                lower_factor * epsilon
            )));
        }
        if delta > 1.0 / cap as f64 {
            return Err(Error::RegimeViolation(format!(
                "delta ≤ 1/{cap} fails: {delta} > {}",
                1.0 / cap as f64
            )));
        }
        Ok(self)
    }
}

/// Smallest integer `g` with `g^d ≥ l`.
pub fn per_dim_l(l: u32, d: u32) -> u32 {
    let d = d.max(1);
    let mut g: u32 = 1;
    while (g as u64).checked_pow(d).is_some_and(|v| v < l as u64) {
        g += 1;
    }
    g
}
