//! Exact privacy sweep over a target grid.

use rayon::prelude::*;
use rayon::ThreadPool;

use privsearch_core::privacy::{product_covering_after_run, verify_target};
use privsearch_core::{Error as CoreError, ProblemParams, SeedSpec, Strategy};

use crate::error::{config_err, Result};
use crate::experiment::{grid_1d, grid_targets};

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub target: Vec<f64>,
    pub stream: u64,
    pub covering: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub targets: usize,
    pub streams: u64,
    pub checked: usize,
    pub min_covering: usize,
    /// Runs whose covering number fell below `L`.
    pub witnesses: Vec<Witness>,
}

/// Every target `step` apart (per coordinate) against `streams` coin streams
/// `0..streams` under `seed`. Strategies without coins use one stream.
pub fn verify_det(
    strategy: Strategy,
    params: &ProblemParams,
    step: f64,
    streams: u64,
    seed: u64,
    pool: &ThreadPool,
) -> Result<VerifyOutcome> {
    if strategy.is_noisy() {
        return Err(config_err("verify-det needs a noiseless strategy"));
    }
    if !(step > 0.0) {
        return Err(config_err("grid step must be positive"));
    }
    let params = params.validate(strategy.setting())?;
    let streams = if strategy.uses_coins() { streams.max(1) } else { 1 };
    let l = params.l as usize;

    let per_target: Vec<(usize, Vec<Witness>, usize)> = if strategy.is_multidim() {
        let grid = grid_targets(step, params.d);
        pool.install(|| {
            grid.par_iter()
                .map(|x| {
                    let mut min = usize::MAX;
                    let mut wit = Vec::new();
                    for s in 0..streams {
                        let c = product_covering_after_run(strategy, &params, x, SeedSpec::new(seed, s))?;
                        min = min.min(c);
                        if c < l {
                            wit.push(Witness { target: x.clone(), stream: s, covering: c });
                        }
                    }
                    Ok((min, wit, streams as usize))
                })
                .collect::<Result<Vec<_>, CoreError>>()
        })?
    } else {
        let grid = grid_1d(step);
        pool.install(|| {
            grid.par_iter()
                .map(|&x| {
                    let r = verify_target(strategy, &params, x, streams, seed)?;
                    let wit = r
                        .witnesses
                        .iter()
                        .map(|&(t, s, c)| Witness { target: vec![t], stream: s, covering: c })
                        .collect();
                    Ok((r.min_covering, wit, r.checked))
                })
                .collect::<Result<Vec<_>, CoreError>>()
        })?
    };

    let mut out = VerifyOutcome {
        targets: per_target.len(),
        streams,
        checked: 0,
        min_covering: usize::MAX,
        witnesses: Vec::new(),
    };
    for (min, wit, checked) in per_target {
        out.min_covering = out.min_covering.min(min);
        out.witnesses.extend(wit);
        out.checked += checked;
    }
    Ok(out)
}
