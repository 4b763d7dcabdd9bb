//! One simulated episode: draw a target, run the learner, run the attacks.

use alloc::vec::Vec;

use crate::adversary::Adversary;
use crate::oracle::{sample_target, NoiseModel, TargetModel};
use crate::params::ProblemParams;
use crate::seed::{SeedSpec, Stream};
use crate::session::drive;
use crate::strategy::Strategy;
use crate::transcript::DimTranscript;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub target: Vec<f64>,
    pub estimate: Vec<f64>,
    /// Reported query count.
    pub queries: u64,
    /// `∞`-norm estimation error.
    pub error: f64,
    /// Per adversary: did its estimate land within `δ/2` in every coordinate.
    pub hits: Vec<bool>,
    pub transcript: DimTranscript,
}

pub fn noise_model(strategy: Strategy, params: &ProblemParams) -> NoiseModel {
    match (strategy.is_noisy(), params.p) {
        (true, Some(p)) => NoiseModel::Flip(p),
        _ => NoiseModel::Noiseless,
    }
}

/// Runs the learner only. 1-D strategies use the plain streams of `spec`;
/// `d`-dimensional ones use one set of coordinate streams per coordinate.
pub fn run_learner(strategy: Strategy, params: &ProblemParams, target: &[f64], spec: SeedSpec) -> Result<DimTranscript> {
    let noise = noise_model(strategy, params);
    let mut out = DimTranscript::default();
    if strategy.is_multidim() {
        for (i, &x) in target.iter().enumerate() {
            let i = i as u32;
            let mut s = strategy.coordinate_session(params, spec, i)?;
            let t = drive(
                &mut s,
                x,
                noise,
                &mut spec.coordinate_rng(Stream::Noise, i),
                &mut spec.coordinate_rng(Stream::Coins, i),
            );
            out.coords.push(t);
        }
    } else {
        let mut s = strategy.session(params, spec)?;
        out.coords.push(drive(&mut s, target[0], noise, &mut spec.rng(Stream::Noise), &mut spec.rng(Stream::Coins)));
    }
    Ok(out)
}

/// Attack estimate, coordinate by coordinate.
pub fn run_attack(adversary: &Adversary, transcript: &DimTranscript, multidim: bool, spec: SeedSpec) -> Result<Vec<f64>> {
    transcript
        .coords
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut rng = if multidim {
                spec.coordinate_rng(Stream::Adversary, i as u32)
            } else {
                spec.rng(Stream::Adversary)
            };
            adversary.attack(t.query_view(), &mut rng)
        })
        .collect()
}

pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn run_trial(
    strategy: Strategy,
    params: &ProblemParams,
    targets: &TargetModel,
    adversaries: &[Adversary],
    spec: SeedSpec,
) -> Result<TrialOutcome> {
    let target = sample_target(targets, &mut spec.rng(Stream::Target));
    let transcript = run_learner(strategy, params, &target, spec)?;
    let estimate = transcript.estimate().expect("session finished without an estimate");
    let error = sup_distance(&estimate, &target);
    let hits = adversaries
        .iter()
        .map(|a| {
            let guess = run_attack(a, &transcript, strategy.is_multidim(), spec)?;
            Ok(sup_distance(&guess, &target) <= params.delta / 2.0)
        })
        .collect::<Result<Vec<bool>>>()?;
    let queries = strategy.reported_queries(params, transcript.len() as u64);
    Ok(TrialOutcome { target, estimate, queries, error, hits, transcript })
}

/// Target model matching the strategy's dimension.
pub fn bayes_targets(strategy: Strategy, params: &ProblemParams) -> TargetModel {
    let dim = if strategy.is_multidim() { params.d } else { 1 };
    TargetModel::BayesUniform { dim }
}
