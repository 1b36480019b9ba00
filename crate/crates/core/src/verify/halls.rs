use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProbeReport;
use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::types::ENVY_TOLERANCE;

/// Returns `(condition, conclusion)` where
///
/// - `condition`: for every `a_i`, `#{a ≥ a_i} ≤ #{b ≥ a_i} + c`;
/// - `conclusion`: `Σ a ≤ Σ b + c` (with the shared envy tolerance).
pub fn halls_check(a: &[f64], b: &[f64], c: f64) -> Result<(bool, bool)> {
    if let Some(bad) = a.iter().chain(b).find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::param(format!("value {bad} outside [0, 1]")));
    }
    if c.is_nan() || c < 0.0 {
        return Err(Error::param(format!("slack c = {c} must be non-negative")));
    }
    let mut sorted_b = b.to_vec();
    sorted_b.sort_by(f64::total_cmp);
    let mut sorted_a = a.to_vec();
    sorted_a.sort_by(f64::total_cmp);
    let at_least = |sorted: &[f64], x: f64| sorted.len() - sorted.partition_point(|y| *y < x);
    let condition = a
        .iter()
        .all(|&x| at_least(&sorted_a, x) as f64 <= at_least(&sorted_b, x) as f64 + c);
    let conclusion = a.iter().sum::<f64>() <= b.iter().sum::<f64>() + c + ENVY_TOLERANCE;
    Ok((condition, conclusion))
}

/// Random instance with a mix of shapes: independent draws, and `a` built
/// by shrinking a copy of `b` and appending a few extra values so that the
/// counting condition is frequently satisfied.
pub fn random_halls_instance<R: Rng + ?Sized>(rng: &mut R) -> (Vec<f64>, Vec<f64>, f64) {
    let c = if rng.random::<bool>() {
        rng.random_range(0..4) as f64
    } else {
        rng.random_range(0.0..3.0)
    };
    let l = rng.random_range(0..10);
    let b: Vec<f64> = (0..l).map(|_| rng.random::<f64>()).collect();
    let a = match rng.random_range(0..3) {
        0 => {
            let k = rng.random_range(1..10);
            (0..k).map(|_| rng.random::<f64>()).collect()
        }
        _ => {
            let mut a = Vec::with_capacity(b.len() + 4);
            for x in &b {
                if rng.random::<f64>() < 0.9 {
                    a.push(x * rng.random_range(0.5..=1.0));
                }
            }
            let extra = rng.random_range(0..=(c.floor() as usize + 1));
            a.extend((0..extra).map(|_| rng.random::<f64>()));
            if a.is_empty() {
                a.push(rng.random::<f64>());
            }
            a
        }
    };
    (a, b, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallsSweep {
    pub instances: u64,
    pub condition_held: u64,
    pub counterexamples: u64,
}

/// Checks `condition ⇒ conclusion` on `instances` random instances.
pub fn halls_property_sweep(instances: u64, seed: RngSeed) -> HallsSweep {
    let mut rng = seed.rng();
    let mut out = HallsSweep {
        instances,
        condition_held: 0,
        counterexamples: 0,
    };
    for _ in 0..instances {
        let (a, b, c) = random_halls_instance(&mut rng);
        let (condition, conclusion) = halls_check(&a, &b, c).expect("generated values are valid");
        if condition {
            out.condition_held += 1;
            if !conclusion {
                out.counterexamples += 1;
            }
        }
    }
    out
}

/// Passes when the sweep finds no counterexample.
pub fn halls_probe(instances: u64, seed: RngSeed) -> ProbeReport {
    let sweep = halls_property_sweep(instances, seed);
    ProbeReport::exact("halls implication", sweep.counterexamples as f64, 0.0, instances, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_sequences() {
        let a = [0.2, 0.9, 0.5, 0.5];
        assert_eq!(halls_check(&a, &a, 0.0).unwrap(), (true, true));
    }

    #[test]
    fn counting_failure() {
        let (condition, _) = halls_check(&[1.0, 1.0], &[0.0], 1.0).unwrap();
        assert!(!condition);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(halls_check(&[1.5], &[0.0], 1.0).is_err());
        assert!(halls_check(&[0.5], &[0.0], -1.0).is_err());
    }

    #[test]
    fn sweep_finds_no_counterexample() {
        let sweep = halls_property_sweep(100_000, RngSeed::new(2024, 0));
        assert_eq!(sweep.counterexamples, 0);
        // the generator must actually exercise the implication
        assert!(sweep.condition_held > 10_000, "{sweep:?}");
    }

    proptest! {
        #[test]
        fn condition_implies_conclusion(
            a in proptest::collection::vec(0.0f64..=1.0, 1..8),
            b in proptest::collection::vec(0.0f64..=1.0, 0..8),
            c in 0u32..4,
        ) {
            let (condition, conclusion) = halls_check(&a, &b, c as f64).unwrap();
            prop_assert!(!condition || conclusion);
        }
    }
}
