//! Statistical invariants that are too slow for unit tests.

use discrepancy_lab::adversaries::{sphere_vector_source, DistributionSpec};
use discrepancy_lab::balancers::{default_c_param, BalancerState};
use discrepancy_lab::experiment::{run_experiment, ExperimentConfig};
use discrepancy_lab::verify::concentration_probe;
use discrepancy_lab::RngSeed;
use rayon::prelude::*;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

fn self_balancing_max(d: usize, horizon: usize, seed: u64) -> f64 {
    let mut state = BalancerState::new(d, default_c_param(d, horizon)).unwrap();
    let mut rng = RngSeed::new(seed, 1).rng();
    let mut worst = 0.0f64;
    for v in sphere_vector_source(d, horizon, RngSeed::new(seed, 0)).unwrap() {
        state.self_balancing_sign(&v, &mut rng).unwrap();
        worst = worst.max(state.d_vec().iter().fold(0.0f64, |m, x| m.max(x.abs())));
    }
    worst
}

#[test]
fn self_balancing_grows_sublinearly() {
    let d = 10;
    let at = |horizon: usize| median((0..50u64).into_par_iter().map(|s| self_balancing_max(d, horizon, s)).collect());
    let small = at(1_000);
    let large = at(1_000_000);
    assert!(large / small <= 4.0, "{small} -> {large}");
}

#[test]
fn concentration_bound_grid() {
    let dists = [
        DistributionSpec::Uniform01,
        DistributionSpec::Bernoulli { p: 0.5 },
        DistributionSpec::Beta { a: 0.5, b: 0.5 },
        DistributionSpec::PointMass { x: 1.0 },
    ];
    for dist in dists {
        for (k, l, trials) in [(1000, 10, 20_000), (10_000, 50, 2_000)] {
            for c in 1..=3 {
                let r = concentration_probe(k, l, c, dist, trials, RngSeed::new(c as u64, k as u64)).unwrap();
                assert!(r.passed, "{dist:?} K={k} L={l} c={c}: {r:?}");
            }
        }
    }
}

#[test]
fn summary_max_equals_record_max() {
    for json in [
        r#"{"mode":"balance","algorithm":"self_balancing","adversary":{"kind":"iid_vector"},"d":6,"T":3000,"seeds":[1,2,3]}"#,
        r#"{"mode":"multicolor","algorithm":"color_tree","adversary":{"kind":"sphere"},"n":4,"d":3,"T":3000,"seeds":[4]}"#,
        r#"{"mode":"envy","algorithm":"discrepancy_tree","adversary":{"kind":"iid_value","dist":{"kind":"uniform01"}},"n":4,"T":3000,"seeds":[5]}"#,
        r#"{"mode":"lowerbound","algorithm":"welfare_max","adversary":{"kind":"oblivious"},"n":2,"T":3000,"delta":0.001,"seeds":[6]}"#,
    ] {
        let out = run_experiment(&ExperimentConfig::from_json(json).unwrap()).unwrap();
        for s in &out.summary.per_seed {
            assert!(s.failed.is_none(), "{json}: {:?}", s.failed);
            let rows: Vec<_> = out.records.iter().filter(|(seed, _)| *seed == s.seed).collect();
            assert_eq!(rows.len(), 3000);
            let max = rows.iter().map(|(_, r)| r.metric).fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(max, s.max_metric, "{json}");
            assert_eq!(rows.last().unwrap().1.monitors["running_max"], s.max_metric);
        }
    }
}

#[test]
fn output_independent_of_thread_count() {
    let cfg = ExperimentConfig::from_json(
        r#"{"mode":"envy","algorithm":"welfare_max","adversary":{"kind":"iid_value","dist":{"kind":"bernoulli","p":0.3}},
            "n":3,"T":2000,"seeds":{"base_seed":0,"count":8},"record_every":13}"#,
    )
    .unwrap();
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| discrepancy_lab::experiment::trajectory_bytes(&run_experiment(&cfg).unwrap().records))
    };
    assert_eq!(run_with(1), run_with(4));
}
