//! Running trials in parallel and reducing them to report rows.
//!
//! Trials are mapped in parallel but collected in trial order and reduced
//! sequentially, and every trial draws only from its own seed streams, so the
//! report does not depend on the thread count.

use rayon::prelude::*;
use rayon::ThreadPool;

use privsearch_core::adversary::{default_truncation, Adversary, HistogramAttack};
use privsearch_core::oracle::sample_target;
use privsearch_core::privacy::{information_set, wilson};
use privsearch_core::trial::{bayes_targets, run_attack, run_learner, run_trial, sup_distance};
use privsearch_core::transcript::DimTranscript;
use privsearch_core::{Error as CoreError, ProblemParams, SeedSpec, Setting, Strategy, Stream, TargetModel};

use crate::config::{AdversarySpec, ExperimentConfig, HistSettings, TargetMode};
use crate::error::{config_err, Result};

/// Trial indices at or above this are reserved for attack training.
pub const TRAINING_OFFSET: u64 = 1 << 40;

pub fn thread_pool(threads: usize) -> Result<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| config_err(format!("thread pool: {e}")))
}

/// One report line: a parameter point, optionally paired with an adversary.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub setting: &'static str,
    pub strategy: &'static str,
    pub adversary: String,
    pub params: ProblemParams,
    pub trials: u64,
    pub queries_mean: f64,
    pub queries_max: u64,
    pub queries_exact_formula: Option<u64>,
    pub err_mean: f64,
    pub err_max: f64,
    /// Sample standard deviation of the error; not part of the CSV.
    pub err_sd: f64,
    pub whp_fail_rate: f64,
    pub breach_rate: Option<f64>,
    pub breach_ci: Option<(f64, f64)>,
    pub min_covering: Option<usize>,
    pub bound_upper: Option<f64>,
    pub bound_lower: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<Row>,
    /// Points outside the valid regime, with the reason.
    pub skipped: Vec<(ProblemParams, String)>,
    /// Broken invariants; any entry means exit code 1.
    pub violations: Vec<String>,
    /// Histogram keys seen in training, per point that trained one.
    pub histogram_keys: Vec<usize>,
}

#[derive(Debug, Clone)]
struct TrialStats {
    queries: u64,
    error: f64,
    hits: Vec<bool>,
    covering: Option<usize>,
}

/// Number of translated copies in the last batch of a replicated strategy.
pub fn map_clones(strategy: Strategy, params: &ProblemParams) -> usize {
    match strategy {
        Strategy::Alg1D | Strategy::DetD => params.per_dim_l() as usize,
        Strategy::NoisyAvg | Strategy::NoisyWhp => 7 * params.l as usize,
        _ => params.l as usize,
    }
}

/// Truncation length for the strategy, using the per-coordinate level in `d`
/// dimensions.
pub fn strategy_truncation(strategy: Strategy, params: &ProblemParams) -> usize {
    if strategy.is_multidim() {
        default_truncation(&ProblemParams { l: params.per_dim_l(), ..*params })
    } else {
        default_truncation(params)
    }
}

/// Fits the histogram attack on `settings.train` simulated Bayesian runs.
pub fn train_histogram(
    strategy: Strategy,
    params: &ProblemParams,
    settings: &HistSettings,
    seed: u64,
    pool: &ThreadPool,
) -> Result<HistogramAttack> {
    let prefix = settings.prefix.unwrap_or_else(|| strategy_truncation(strategy, params) + 1);
    let targets = bayes_targets(strategy, params);
    let corpus: Vec<(Vec<Vec<f64>>, Vec<f64>)> = pool.install(|| {
        (0..settings.train)
            .into_par_iter()
            .map(|i| {
                let spec = SeedSpec::new(seed, TRAINING_OFFSET + i);
                let x = sample_target(&targets, &mut spec.rng(Stream::Target));
                let t = run_learner(strategy, params, &x, spec)?;
                let heads = t.coords.iter().map(|c| c.queries.iter().take(prefix).copied().collect()).collect();
                Ok((heads, x))
            })
            .collect::<Result<Vec<_>, CoreError>>()
    })?;
    let mut h = HistogramAttack::new(settings.bins, prefix, params.delta);
    for (heads, x) in &corpus {
        for (q, &xi) in heads.iter().zip(x) {
            h.train(q, xi);
        }
    }
    Ok(h)
}

fn build_adversaries(
    cfg: &ExperimentConfig,
    params: &ProblemParams,
    pool: &ThreadPool,
    keys: &mut Vec<usize>,
) -> Result<Vec<Adversary>> {
    cfg.adversaries
        .iter()
        .map(|a| {
            Ok(match a {
                AdversarySpec::Last => Adversary::LastQuery,
                AdversarySpec::Prop => Adversary::Proportional,
                AdversarySpec::Trunc(k) => {
                    Adversary::TruncatedProportional(k.unwrap_or_else(|| strategy_truncation(cfg.strategy, params)))
                }
                AdversarySpec::Map => Adversary::CandidateIntervalMap { clones: map_clones(cfg.strategy, params) },
                AdversarySpec::Hist => {
                    let h = train_histogram(cfg.strategy, params, &cfg.hist, cfg.seed, pool)?;
                    keys.push(h.keys());
                    Adversary::Histogram(h)
                }
            })
        })
        .collect()
}

/// Covering number of the information set of a noiseless run, multiplied
/// across coordinates.
pub fn run_covering(
    strategy: Strategy,
    params: &ProblemParams,
    spec: SeedSpec,
    t: &DimTranscript,
) -> Result<usize, CoreError> {
    let mut product = 1usize;
    for (i, c) in t.coords.iter().enumerate() {
        let fresh = if strategy.is_multidim() {
            strategy.coordinate_session(params, spec, i as u32)?
        } else {
            strategy.session(params, spec)?
        };
        product *= information_set(&fresh, c.query_view())?.covering_number(params.delta)?;
    }
    Ok(product)
}

/// Targets spaced `step` apart from 0, plus 1 itself.
pub fn grid_1d(step: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..).map(|k| k as f64 * step).take_while(|&x| x < 1.0).collect();
    v.push(1.0);
    v
}

/// The `dim`-fold product of [`grid_1d`], first coordinate varying slowest.
pub fn grid_targets(step: f64, dim: u32) -> Vec<Vec<f64>> {
    let axis = grid_1d(step);
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p| axis.iter().map(move |&x| [p.as_slice(), &[x]].concat())).collect();
    }
    out
}

fn trial_bayes(
    cfg: &ExperimentConfig,
    params: &ProblemParams,
    targets: &TargetModel,
    adversaries: &[Adversary],
    i: u64,
) -> Result<TrialStats, CoreError> {
    let spec = SeedSpec::new(cfg.seed, i);
    let out = run_trial(cfg.strategy, params, targets, adversaries, spec)?;
    let covering = match cfg.covering {
        true => Some(run_covering(cfg.strategy, params, spec, &out.transcript)?),
        false => None,
    };
    Ok(TrialStats { queries: out.queries, error: out.error, hits: out.hits, covering })
}

fn trial_grid(
    cfg: &ExperimentConfig,
    params: &ProblemParams,
    target: &[f64],
    stream: u64,
    adversaries: &[Adversary],
) -> Result<TrialStats, CoreError> {
    let spec = SeedSpec::new(cfg.seed, stream);
    let t = run_learner(cfg.strategy, params, target, spec)?;
    let est = t.estimate().expect("session finished without an estimate");
    let hits = adversaries
        .iter()
        .map(|a| {
            let guess = run_attack(a, &t, cfg.strategy.is_multidim(), spec)?;
            Ok(sup_distance(&guess, target) <= params.delta / 2.0)
        })
        .collect::<Result<Vec<bool>, CoreError>>()?;
    let covering = match cfg.covering {
        true => Some(run_covering(cfg.strategy, params, spec, &t)?),
        false => None,
    };
    Ok(TrialStats {
        queries: cfg.strategy.reported_queries(params, t.len() as u64),
        error: sup_distance(&est, target),
        hits,
        covering,
    })
}

fn needs_privacy_floor(strategy: Strategy) -> bool {
    matches!(strategy.setting(), Setting::Deterministic | Setting::DeterministicD)
}

fn run_point(
    cfg: &ExperimentConfig,
    params: &ProblemParams,
    pool: &ThreadPool,
    report: &mut ExperimentReport,
) -> Result<()> {
    let adversaries = build_adversaries(cfg, params, pool, &mut report.histogram_keys)?;
    let stats: Vec<TrialStats> = match cfg.targets {
        TargetMode::Bayes => {
            let targets = bayes_targets(cfg.strategy, params);
            pool.install(|| {
                (0..cfg.trials)
                    .into_par_iter()
                    .map(|i| trial_bayes(cfg, params, &targets, &adversaries, i))
                    .collect::<Result<Vec<_>, CoreError>>()
            })?
        }
        TargetMode::Grid => {
            let dim = if cfg.strategy.is_multidim() { params.d } else { 1 };
            let grid = grid_targets(cfg.grid_step.unwrap_or(params.epsilon / 3.0), dim);
            let streams = if cfg.strategy.uses_coins() { cfg.streams.max(1) } else { 1 };
            let n = grid.len() as u64 * streams;
            pool.install(|| {
                (0..n)
                    .into_par_iter()
                    .map(|k| trial_grid(cfg, params, &grid[(k / streams) as usize], k % streams, &adversaries))
                    .collect::<Result<Vec<_>, CoreError>>()
            })?
        }
    };

    let n = stats.len() as u64;
    let half = params.epsilon / 2.0;
    let queries_max = stats.iter().map(|s| s.queries).max().unwrap_or(0);
    let queries_mean = stats.iter().map(|s| s.queries as f64).sum::<f64>() / n.max(1) as f64;
    let err_max = stats.iter().map(|s| s.error).fold(0.0, f64::max);
    let err_mean = stats.iter().map(|s| s.error).sum::<f64>() / n.max(1) as f64;
    let err_sd = match n {
        0 | 1 => 0.0,
        _ => (stats.iter().map(|s| (s.error - err_mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt(),
    };
    let fails = stats.iter().filter(|s| s.error > half).count() as u64;
    let min_covering = if cfg.covering { stats.iter().filter_map(|s| s.covering).min() } else { None };

    let strategy = cfg.strategy;
    let bound_upper = strategy.bound_upper(params);
    let label = point_label(strategy, params);
    if !strategy.is_noisy() && err_max > half {
        report.violations.push(format!("{label}: err_max {err_max:e} exceeds eps/2"));
    }
    if let Some(b) = bound_upper {
        if queries_max as f64 > b {
            report.violations.push(format!("{label}: queries_max {queries_max} exceeds bound {b}"));
        }
    }
    if let (true, Some(c)) = (needs_privacy_floor(strategy), min_covering) {
        if c < params.l as usize {
            report.violations.push(format!("{label}: min_covering {c} below L = {}", params.l));
        }
    }

    let base = Row {
        setting: strategy.setting().name(),
        strategy: strategy.id(),
        adversary: String::new(),
        params: *params,
        trials: n,
        queries_mean,
        queries_max,
        queries_exact_formula: strategy.exact_queries(params).ok(),
        err_mean,
        err_max,
        err_sd,
        whp_fail_rate: fails as f64 / n.max(1) as f64,
        breach_rate: None,
        breach_ci: None,
        min_covering,
        bound_upper,
        bound_lower: strategy.bound_lower(params),
        seed: cfg.seed,
    };
    if cfg.adversaries.is_empty() {
        report.rows.push(base.clone());
    }
    for (a, spec) in cfg.adversaries.iter().enumerate() {
        let hits = stats.iter().filter(|s| s.hits[a]).count() as u64;
        report.rows.push(Row {
            adversary: spec.label(),
            breach_rate: Some(hits as f64 / n.max(1) as f64),
            breach_ci: Some(wilson(hits, n, 1.96)),
            ..base.clone()
        });
    }
    Ok(())
}

pub fn point_label(strategy: Strategy, p: &ProblemParams) -> String {
    let mut s = format!("{} eps={} delta={} L={}", strategy.id(), p.epsilon, p.delta, p.l);
    if let Some(v) = p.p {
        s += &format!(" p={v}");
    }
    if let Some(v) = p.m {
        s += &format!(" M={v}");
    }
    if p.d > 1 {
        s += &format!(" d={}", p.d);
    }
    s
}

/// Runs every parameter point of `cfg` on `cfg.parallelism` threads. Points
/// outside the strategy's regime are skipped and listed in the report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let pool = thread_pool(cfg.parallelism)?;
    let mut report = ExperimentReport::default();
    for params in cfg.points() {
        let checked = params
            .validate(cfg.strategy.setting())
            .and_then(|p| cfg.strategy.exact_queries(&p).map(|_| p));
        match checked {
            Ok(p) => run_point(cfg, &p, &pool, &mut report)?,
            Err(CoreError::RegimeViolation(why)) => report.skipped.push((params, why)),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(report)
}
