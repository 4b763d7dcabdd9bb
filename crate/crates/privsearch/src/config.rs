//! Experiment configuration: flat `key = value` text, `#` comments, comma
//! lists and `geom(start, stop, factor)` ranges.
//!
//! Command-line flags are turned into the same key map, so a config file and
//! a flag set describe experiments identically.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use privsearch_core::{ProblemParams, Setting, Strategy};

use crate::error::{config_err, Result};

pub type KeyValues = BTreeMap<String, String>;

pub fn parse_key_values(text: &str) -> Result<KeyValues> {
    let mut map = KeyValues::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected `key = value`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(config_err(format!("line {}: empty key or value", n + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(config_err(format!("line {}: duplicate key `{k}`", n + 1)));
        }
    }
    Ok(map)
}

/// `start, start·factor, ...` up to and including `stop` (up to rounding).
pub fn geom(start: f64, stop: f64, factor: f64) -> Result<Vec<f64>> {
    let ok = start > 0.0
        && stop > 0.0
        && factor > 0.0
        && factor != 1.0
        && ((factor < 1.0 && stop <= start) || (factor > 1.0 && stop >= start));
    if !ok {
        return Err(config_err(format!("geom({start}, {stop}, {factor}) is not a finite range")));
    }
    let past = |v: f64| if factor < 1.0 { v < stop * (1.0 - 1e-12) } else { v > stop * (1.0 + 1e-12) };
    let mut out = Vec::new();
    let mut v = start;
    while !past(v) {
        out.push(v);
        v *= factor;
    }
    Ok(out)
}

fn parse_one<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| config_err(format!("{key}: cannot parse `{}`", s.trim())))
}

pub fn parse_floats(key: &str, s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if let Some(args) = s.strip_prefix("geom(").and_then(|r| r.strip_suffix(')')) {
        let a: Vec<f64> = args.split(',').map(|x| parse_one(key, x)).collect::<Result<_>>()?;
        if a.len() != 3 {
            return Err(config_err(format!("{key}: geom takes (start, stop, factor)")));
        }
        return geom(a[0], a[1], a[2]);
    }
    s.split(',').map(|x| parse_one(key, x)).collect()
}

fn parse_list<T: FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(',').map(|x| parse_one(key, x)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversarySpec {
    Last,
    Prop,
    /// Truncation length; the strategy's default when absent.
    Trunc(Option<usize>),
    Map,
    Hist,
}

impl FromStr for AdversarySpec {
    type Err = crate::error::HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "last" => AdversarySpec::Last,
            "prop" => AdversarySpec::Prop,
            "trunc" => AdversarySpec::Trunc(None),
            "map" => AdversarySpec::Map,
            "hist" => AdversarySpec::Hist,
            other => match other.strip_prefix("trunc:") {
                Some(k) => AdversarySpec::Trunc(Some(parse_one("adversary", k)?)),
                None => return Err(config_err(format!("unknown adversary `{other}`"))),
            },
        })
    }
}

impl AdversarySpec {
    pub fn label(&self) -> String {
        match self {
            AdversarySpec::Last => "last".into(),
            AdversarySpec::Prop => "prop".into(),
            AdversarySpec::Trunc(None) => "trunc".into(),
            AdversarySpec::Trunc(Some(k)) => format!("trunc:{k}"),
            AdversarySpec::Map => "map".into(),
            AdversarySpec::Hist => "hist".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetMode {
    /// Targets drawn uniformly, one per trial.
    Bayes,
    /// Every target of a fixed grid, each against `streams` coin streams.
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistSettings {
    pub bins: u32,
    pub train: u64,
    /// Quantized query prefix used as the lookup key.
    pub prefix: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub strategy: Strategy,
    pub adversaries: Vec<AdversarySpec>,
    pub eps: Vec<f64>,
    pub delta: Vec<f64>,
    pub l: Vec<u32>,
    pub p: Vec<f64>,
    pub m: Vec<f64>,
    pub d: Vec<u32>,
    pub trials: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub parallelism: usize,
    pub targets: TargetMode,
    pub streams: u64,
    /// Grid spacing for [`TargetMode::Grid`]; `ε/3` when absent.
    pub grid_step: Option<f64>,
    /// Whether to compute exact information-set covering numbers.
    pub covering: bool,
    pub hist: HistSettings,
}

const KEYS: [&str; 20] = [
    "setting", "strategy", "adversary", "eps", "delta", "L", "p", "M", "d", "trials", "seed", "out",
    "parallelism", "targets", "streams", "grid_step", "covering", "hist_bins", "hist_train", "hist_prefix",
];

pub fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl ExperimentConfig {
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        if let Some(k) = kv.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(config_err(format!("unknown key `{k}`")));
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let need = |k: &str| get(k).ok_or_else(|| config_err(format!("missing key `{k}`")));

        let sid = need("strategy")?;
        let strategy = Strategy::from_id(sid).ok_or_else(|| config_err(format!("unknown strategy `{sid}`")))?;
        if let Some(name) = get("setting") {
            let setting = Setting::from_name(name).ok_or_else(|| config_err(format!("unknown setting `{name}`")))?;
            if setting != strategy.setting() {
                return Err(config_err(format!("strategy `{sid}` solves `{}`, not `{name}`", strategy.setting().name())));
            }
        }
        let adversaries = match get("adversary") {
            Some(s) => parse_list("adversary", s)?,
            None => Vec::new(),
        };
        let l: Vec<u32> = parse_list("L", need("L")?)?;
        let d = match get("d") {
            Some(s) => parse_list("d", s)?,
            None if strategy.is_multidim() => return Err(config_err("missing key `d`")),
            None => vec![1],
        };
        let det = matches!(strategy.setting(), Setting::Deterministic | Setting::DeterministicD);
        let targets = match get("targets") {
            None if det => TargetMode::Grid,
            None | Some("bayes") => TargetMode::Bayes,
            Some("grid") => TargetMode::Grid,
            Some(o) => return Err(config_err(format!("targets must be `bayes` or `grid`, not `{o}`"))),
        };
        let covering = match get("covering") {
            Some(s) => parse_one("covering", s)?,
            None => det || strategy == Strategy::Bisection,
        };
        if covering && strategy.is_noisy() {
            return Err(config_err("covering numbers need noiseless responses"));
        }
        let cfg = ExperimentConfig {
            strategy,
            adversaries,
            eps: parse_floats("eps", need("eps")?)?,
            delta: parse_floats("delta", need("delta")?)?,
            l,
            p: get("p").map_or(Ok(Vec::new()), |s| parse_floats("p", s))?,
            m: get("M").map_or(Ok(Vec::new()), |s| parse_floats("M", s))?,
            d,
            trials: get("trials").map_or(Ok(1000), |s| parse_one("trials", s))?,
            seed: get("seed").map_or(Ok(0), |s| parse_one("seed", s))?,
            out: get("out").map(PathBuf::from),
            parallelism: get("parallelism").map_or(Ok(default_parallelism()), |s| parse_one("parallelism", s))?,
            targets,
            streams: get("streams").map_or(Ok(32), |s| parse_one("streams", s))?,
            grid_step: get("grid_step").map(|s| parse_one("grid_step", s)).transpose()?,
            covering,
            hist: HistSettings {
                bins: get("hist_bins").map_or(Ok(1024), |s| parse_one("hist_bins", s))?,
                train: get("hist_train").map_or(Ok(100_000), |s| parse_one("hist_train", s))?,
                prefix: get("hist_prefix").map(|s| parse_one("hist_prefix", s)).transpose()?,
            },
        };
        if cfg.strategy.is_noisy() && cfg.p.is_empty() {
            return Err(config_err("noisy strategies need `p`"));
        }
        if cfg.strategy == Strategy::NoisyWhp && cfg.m.is_empty() {
            return Err(config_err("noisy-whp needs `M`"));
        }
        if cfg.parallelism == 0 || cfg.hist.bins == 0 {
            return Err(config_err("parallelism and hist_bins must be positive"));
        }
        if cfg.targets == TargetMode::Grid && cfg.strategy.is_noisy() {
            return Err(config_err("grid targets need noiseless responses"));
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_key_values(&parse_key_values(text)?)
    }

    /// Every parameter combination, `eps` varying slowest.
    pub fn points(&self) -> Vec<ProblemParams> {
        let opt = |v: &[f64]| if v.is_empty() { vec![None] } else { v.iter().copied().map(Some).collect() };
        let mut out = Vec::new();
        for &eps in &self.eps {
            for &delta in &self.delta {
                for &l in &self.l {
                    for p in opt(&self.p) {
                        for m in opt(&self.m) {
                            for &d in &self.d {
                                out.push(ProblemParams { epsilon: eps, delta, l, p, m, d });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}
