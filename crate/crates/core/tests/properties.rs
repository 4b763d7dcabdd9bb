use privsearch_core::adversary::Adversary;
use privsearch_core::bounds::{eval_bound, BoundKind};
use privsearch_core::noisy::BeliefGrid;
use privsearch_core::privacy::information_set;
use privsearch_core::trial::run_learner;
use privsearch_core::Strategy as Learner;
use privsearch_core::{covering_number, Interval, ProblemParams, SeedSpec, Setting, Stream};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const H: f64 = 1.0 / 16.0;

fn covered(x: f64, lefts: &[f64], delta: f64) -> bool {
    lefts.iter().any(|&a| a <= x && x <= a + delta)
}

/// Checks every half-grid point of the set; all breakpoints lie on the grid,
/// so that decides coverage.
fn first_uncovered(set: &[Interval], lefts: &[f64], delta: f64) -> Option<f64> {
    for c in set {
        let steps = ((c.hi - c.lo) / (H / 2.0)).round() as u32;
        for i in 0..=steps {
            let x = c.lo + i as f64 * H / 2.0;
            if !covered(x, lefts, delta) {
                return Some(x);
            }
        }
    }
    None
}

fn coverable(set: &[Interval], lefts: &mut Vec<f64>, delta: f64, budget: usize) -> bool {
    let Some(x) = first_uncovered(set, lefts, delta) else {
        return true;
    };
    if lefts.len() == budget {
        return false;
    }
    // Some cover must contain x; try every grid-aligned one.
    let mut a = (x - delta).max(-delta);
    while a <= x + 1e-12 {
        let snapped = (a / H).round() * H;
        lefts.push(snapped);
        let ok = coverable(set, lefts, delta, budget);
        lefts.pop();
        if ok {
            return true;
        }
        a += H;
    }
    false
}

fn brute_covering(set: &[Interval], delta: f64) -> usize {
    (1..).find(|&k| coverable(set, &mut Vec::new(), delta, k)).unwrap()
}

fn grid_set() -> impl Strategy<Value = Vec<Interval>> {
    proptest::collection::btree_set(0u32..=16, 1..=12).prop_map(|pts| {
        let pts: Vec<u32> = pts.into_iter().collect();
        let mut out: Vec<Interval> = Vec::new();
        for pair in pts.chunks(2) {
            let lo = pair[0] as f64 * H;
            let hi = pair.get(1).map_or(lo, |&h| h as f64 * H);
            out.push(Interval::new(lo, hi));
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn covering_matches_brute_force(set in grid_set(), k in 1u32..=8) {
        let delta = k as f64 * H;
        prop_assert_eq!(covering_number(&set, delta).unwrap(), brute_covering(&set, delta));
    }

    #[test]
    fn belief_stays_normalized(seed in any::<u64>(), cells in 2u32..200, p in 0.55f64..0.99) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = BeliefGrid::uniform(Interval::UNIT, cells);
        let alpha = privsearch_core::noisy::bz_alpha(p);
        for _ in 0..200 {
            let j = rand::Rng::gen_range(&mut rng, 0..=cells);
            b.update_at(j, rand::Rng::gen_bool(&mut rng, 0.5), alpha);
            let total: f64 = b.masses().iter().sum();
            prop_assert!((total - 1.0).abs() <= 2f64.powi(-40));
            prop_assert!(b.masses().iter().all(|&w| w >= 0.0));
        }
    }

    #[test]
    fn expected_query_is_median(masses in proptest::collection::vec(0.001f64..1.0, 2..64)) {
        let total: f64 = masses.iter().sum();
        let b = BeliefGrid::from_masses(Interval::UNIT, masses.iter().map(|w| w / total).collect());
        let (j, pi1) = b.median_cell();
        prop_assert!((0.0..=1.0).contains(&pi1));
        let mean = pi1 * b.endpoint(j) + (1.0 - pi1) * b.endpoint(j + 1);
        prop_assert!((mean - b.median()).abs() <= 2f64.powi(-30));
    }

    #[test]
    fn noiseless_strategies_are_accurate(x in 0.0f64..=1.0, seed in any::<u64>(), which in 0usize..6) {
        let (strategy, params) = [
            (Learner::Bisection, ProblemParams::noiseless(2f64.powi(-10), 2f64.powi(-6), 4)),
            (Learner::Replicated, ProblemParams::noiseless(2f64.powi(-10), 2f64.powi(-6), 4)),
            (Learner::Alg1, ProblemParams::noiseless(2f64.powi(-10), 0.02, 5)),
            (Learner::Alg2, ProblemParams::noiseless(2f64.powi(-10), 2f64.powi(-5), 3)),
            (Learner::Alg3, ProblemParams::noiseless(2f64.powi(-10), 0.03, 7)),
            (Learner::Det, ProblemParams::noiseless(2f64.powi(-9), 0.1, 3)),
        ][which];
        let spec = SeedSpec::new(seed, 0);
        let t = run_learner(strategy, &params, &[x], spec).unwrap();
        let est = t.estimate().unwrap()[0];
        prop_assert!((est - x).abs() <= params.epsilon / 2.0, "{} {x} {est}", strategy.id());
        let reported = strategy.reported_queries(&params, t.len() as u64);
        prop_assert_eq!(reported, strategy.exact_queries(&params).unwrap());
        prop_assert_eq!(run_learner(strategy, &params, &[x], spec).unwrap(), t);
    }

    #[test]
    fn det_information_set_holds_target(x in 0.0f64..=1.0, seed in any::<u64>(), large in any::<bool>()) {
        let (strategy, params) = if large {
            (Learner::Alg3, ProblemParams::noiseless(2f64.powi(-10), 0.03, 7))
        } else {
            (Learner::Alg2, ProblemParams::noiseless(2f64.powi(-10), 2f64.powi(-5), 3))
        };
        let spec = SeedSpec::new(seed, 0);
        let fresh = strategy.session(&params, spec).unwrap();
        let t = run_learner(strategy, &params, &[x], spec).unwrap();
        let set = information_set(&fresh, t.coords[0].query_view()).unwrap();
        prop_assert!(set.contains(x));
        prop_assert!(set.covering_number(params.delta).unwrap() >= params.l as usize);
        prop_assert!(set.components.windows(2).all(|w| w[0].hi < w[1].lo));
        prop_assert_eq!(information_set(&fresh, t.coords[0].query_view()).unwrap(), set);
    }

    #[test]
    fn attacks_return_observed_queries(qs in proptest::collection::vec(0.0f64..1.0, 1..40), k in 0usize..40, seed in any::<u64>()) {
        let mut rng = SeedSpec::new(seed, 0).rng(Stream::Adversary);
        let last = Adversary::LastQuery.attack(&qs, &mut rng).unwrap();
        prop_assert_eq!(last, *qs.last().unwrap());
        let prop = Adversary::Proportional.attack(&qs, &mut rng).unwrap();
        prop_assert!(qs.contains(&prop));
        match Adversary::TruncatedProportional(k).attack(&qs, &mut rng) {
            Ok(v) => prop_assert!(qs[k..].contains(&v)),
            Err(_) => prop_assert!(k >= qs.len()),
        }
    }

    #[test]
    fn bayes_upper_monotone(a in 6i32..14, b in 2i32..5, l in 2u32..6) {
        let delta = 2f64.powi(-b) / l as f64;
        let upper = |eps: f64, l: u32| {
            eval_bound(Setting::BayesNoiseless, BoundKind::UpperNew, &ProblemParams::noiseless(eps, delta, l)).map(|v| v.value)
        };
        let eps = 2f64.powi(-a);
        if let (Ok(u), Ok(finer)) = (upper(eps, l), upper(eps / 2.0, l)) {
            prop_assert!(finer >= u);
        }
        if let (Ok(u), Ok(more)) = (upper(eps, l), upper(eps, l + 1)) {
            prop_assert!(more >= u);
        }
    }

    #[test]
    fn det_gap_at_most_eight(a in 4i32..20, frac in 0.0f64..1.0, l in 2u32..10) {
        let eps = 2f64.powi(-a);
        let lo = 2.0 * eps;
        let hi = 1.0 / l as f64;
        prop_assume!(lo < hi);
        let delta = lo + frac * (hi - lo);
        let params = ProblemParams::noiseless(eps, delta, l);
        let up = eval_bound(Setting::Deterministic, BoundKind::UpperNew, &params).unwrap().value;
        let low = eval_bound(Setting::Deterministic, BoundKind::LowerNew, &params).unwrap().value;
        prop_assert!(up >= low && up - low <= 8.0, "{up} {low}");
        let more = eval_bound(Setting::Deterministic, BoundKind::UpperNew, &ProblemParams::noiseless(eps, delta, l + 1));
        if let Ok(m) = more {
            prop_assert!(m.value >= up);
        }
    }
}
