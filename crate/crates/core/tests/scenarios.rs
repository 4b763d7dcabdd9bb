use privsearch_core::adversary::Adversary;
use privsearch_core::privacy::{estimate_breach, product_covering_after_run, verify_det_privacy};
use privsearch_core::worked::{replay_example, EXAMPLES};
use privsearch_core::{ProblemParams, SeedSpec, Strategy};

#[test]
fn registered_examples_pass() {
    for (name, _) in EXAMPLES {
        let r = replay_example(name).unwrap();
        assert!(r.passed, "{name}: {:?}", r.diffs);
    }
}

#[test]
fn replicated_map_breach_is_one_over_l() {
    let params = ProblemParams::noiseless(2f64.powi(-8), 2f64.powi(-4), 4);
    let adv = Adversary::CandidateIntervalMap { clones: 4 };
    let r = estimate_breach(Strategy::Replicated, &adv, &params, 4000, 3).unwrap();
    assert!(r.ci95.0 <= 0.25 && 0.25 <= r.ci95.1, "{r:?}");
    assert_eq!(r, estimate_breach(Strategy::Replicated, &adv, &params, 4000, 3).unwrap());
}

#[test]
fn small_delta_sweep_never_drops_below_l() {
    let eps = 2f64.powi(-7);
    let params = ProblemParams::noiseless(eps, 2f64.powi(-4), 3);
    let grid: Vec<f64> = (0..=384).map(|k| k as f64 / 384.0).collect();
    let r = verify_det_privacy(Strategy::Alg2, &params, &grid, 8, 0).unwrap();
    assert!(r.min_covering >= 3);
    assert!(r.witnesses.is_empty());
    assert_eq!(r.checked, grid.len() * 8);
}

#[test]
fn product_covering_in_two_dims() {
    let params = ProblemParams::noiseless(2f64.powi(-10), 2f64.powi(-6), 4).with_dim(2);
    for (i, x) in [[0.1, 0.9], [0.5, 0.5], [0.0, 1.0], [0.731, 0.002]].iter().enumerate() {
        let c = product_covering_after_run(Strategy::DetD, &params, x, SeedSpec::new(1, i as u64)).unwrap();
        assert!(c >= 4, "{x:?}: {c}");
    }
}
