use rand::Rng;

use crate::error::Result;
use crate::types::{AllocationState, ValueItem};

/// Gives the item to an agent with the largest value, uniformly among ties.
pub fn welfare_max_step<R: Rng + ?Sized>(
    state: &mut AllocationState,
    item: &ValueItem,
    rng: &mut R,
) -> Result<usize> {
    let values = item.values();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties = values.iter().filter(|v| **v == best).count();
    let pick = if ties > 1 { rng.random_range(0..ties) } else { 0 };
    let recipient = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == best)
        .nth(pick)
        .map(|(i, _)| i)
        .expect("at least one maximizer");
    state.update(item, recipient)?;
    Ok(recipient)
}

/// Gives the item to a uniformly random agent.
pub fn random_step<R: Rng + ?Sized>(
    state: &mut AllocationState,
    item: &ValueItem,
    rng: &mut R,
) -> Result<usize> {
    let recipient = rng.random_range(0..state.n());
    state.update(item, recipient)?;
    Ok(recipient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;
    use crate::types::max_envy;
    use proptest::prelude::*;
    use rand::Rng;

    fn item(v: &[f64]) -> ValueItem {
        ValueItem::new(v.to_vec()).unwrap()
    }

    #[test]
    fn picks_the_maximizer() {
        let mut s = AllocationState::new(2).unwrap();
        let mut rng = RngSeed::new(0, 0).rng();
        assert_eq!(welfare_max_step(&mut s, &item(&[0.9, 0.1]), &mut rng).unwrap(), 0);
        assert_eq!(s.bundle_value(0, 0), 0.9);
    }

    #[test]
    fn ties_are_fair() {
        let mut rng = RngSeed::new(12, 0).rng();
        let trials = 100_000;
        let mut first = 0;
        for _ in 0..trials {
            let mut s = AllocationState::new(2).unwrap();
            if welfare_max_step(&mut s, &item(&[0.5, 0.5]), &mut rng).unwrap() == 0 {
                first += 1;
            }
        }
        let sd = (trials as f64 * 0.25).sqrt();
        assert!((first as f64 - trials as f64 / 2.0).abs() <= 4.0 * sd);
    }

    /// Independent oracle: max over time of |simple ±1 random walk|.
    fn random_walk_max(t: usize, seed: u64) -> f64 {
        let mut rng = RngSeed::new(seed, 7).rng();
        let mut pos: i64 = 0;
        let mut best: i64 = 0;
        for _ in 0..t {
            pos += if rng.random::<bool>() { 1 } else { -1 };
            best = best.max(pos.abs());
        }
        best as f64
    }

    fn median(mut xs: Vec<f64>) -> f64 {
        xs.sort_by(f64::total_cmp);
        let m = xs.len() / 2;
        if xs.len() % 2 == 0 {
            (xs[m - 1] + xs[m]) / 2.0
        } else {
            xs[m]
        }
    }

    #[test]
    fn point_mass_envy_behaves_like_a_random_walk() {
        let horizon = 10_000;
        let sqrt_t = (horizon as f64).sqrt();
        let maxima: Vec<f64> = (0..100)
            .map(|seed| {
                let mut rng = RngSeed::new(seed, 0).rng();
                let mut s = AllocationState::new(2).unwrap();
                let ones = item(&[1.0, 1.0]);
                let mut best = 0.0f64;
                for _ in 0..horizon {
                    welfare_max_step(&mut s, &ones, &mut rng).unwrap();
                    best = best.max(max_envy(&s));
                }
                best
            })
            .collect();
        let ours = median(maxima);
        let oracle = median((0..100).map(|s| random_walk_max(horizon, s)).collect());
        for m in [ours, oracle] {
            assert!(m >= 0.5 * sqrt_t && m <= 3.0 * sqrt_t, "{m}");
        }
        assert!((ours - oracle).abs() <= 0.5 * sqrt_t);
    }

    proptest! {
        #[test]
        fn argmax_invariant_under_rescaling(
            values in proptest::collection::vec(0.0f64..=1.0, 2..6),
            scale in 0.01f64..=1.0,
            seed in 0u64..1000,
        ) {
            let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
            let mut a = AllocationState::new(values.len()).unwrap();
            let mut b = AllocationState::new(values.len()).unwrap();
            let ra = welfare_max_step(&mut a, &item(&values), &mut RngSeed::new(seed, 0).rng()).unwrap();
            let rb = welfare_max_step(&mut b, &item(&scaled), &mut RngSeed::new(seed, 0).rng()).unwrap();
            prop_assert_eq!(ra, rb);
        }
    }
}
