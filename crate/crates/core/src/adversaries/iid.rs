use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::distribution::{DistributionSpec, Sampler};
use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::types::{ValueItem, VectorItem};

/// Coordinate scaling of [`iid_vector_source`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VectorScale {
    /// Coordinates in `[-1, 1]`; vectors may leave the unit ball.
    Raw,
    /// Coordinates in `[-1/√d, 1/√d]`, so `‖v‖₂ ≤ 1`.
    #[default]
    InvSqrtD,
}

/// `T` vectors with i.i.d. uniform coordinates.
#[derive(Debug, Clone)]
pub struct IidVectorSource {
    d: usize,
    remaining: usize,
    factor: f64,
    rng: ChaCha8Rng,
}

pub fn iid_vector_source(
    d: usize,
    horizon: usize,
    scale: VectorScale,
    seed: RngSeed,
) -> Result<IidVectorSource> {
    if d == 0 {
        return Err(Error::param("vector sources need d >= 1"));
    }
    let factor = match scale {
        VectorScale::Raw => 1.0,
        VectorScale::InvSqrtD => 1.0 / (d as f64).sqrt(),
    };
    Ok(IidVectorSource {
        d,
        remaining: horizon,
        factor,
        rng: seed.rng(),
    })
}

impl Iterator for IidVectorSource {
    type Item = VectorItem;

    fn next(&mut self) -> Option<VectorItem> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let coords = (0..self.d)
            .map(|_| self.rng.random_range(-1.0..=1.0) * self.factor)
            .collect();
        Some(VectorItem::new(coords).expect("finite coordinates"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

/// `T` vectors drawn uniformly from the unit sphere `S^{d-1}`.
#[derive(Debug, Clone)]
pub struct SphereSource {
    d: usize,
    remaining: usize,
    rng: ChaCha8Rng,
}

pub fn sphere_vector_source(d: usize, horizon: usize, seed: RngSeed) -> Result<SphereSource> {
    if d == 0 {
        return Err(Error::param("vector sources need d >= 1"));
    }
    Ok(SphereSource {
        d,
        remaining: horizon,
        rng: seed.rng(),
    })
}

impl Iterator for SphereSource {
    type Item = VectorItem;

    fn next(&mut self) -> Option<VectorItem> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        loop {
            let g: Vec<f64> = (0..self.d)
                .map(|_| self.rng.sample::<f64, _>(StandardNormal))
                .collect();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-300 {
                let coords = g.into_iter().map(|x| x / norm).collect();
                return Some(VectorItem::new(coords).expect("finite coordinates"));
            }
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

/// `T` items whose `n` agent values are i.i.d. draws from `dist`.
#[derive(Debug, Clone)]
pub struct IidValueSource {
    n: usize,
    remaining: usize,
    sampler: Sampler,
    rng: ChaCha8Rng,
}

pub fn iid_value_source(
    n: usize,
    horizon: usize,
    dist: DistributionSpec,
    seed: RngSeed,
) -> Result<IidValueSource> {
    if n < 2 {
        return Err(Error::param("value sources need n >= 2"));
    }
    dist.validate_within(0.0, 1.0)?;
    Ok(IidValueSource {
        n,
        remaining: horizon,
        sampler: dist.sampler()?,
        rng: seed.rng(),
    })
}

impl Iterator for IidValueSource {
    type Item = ValueItem;

    fn next(&mut self) -> Option<ValueItem> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let values = (0..self.n).map(|_| self.sampler.sample(&mut self.rng)).collect();
        Some(ValueItem::new(values).expect("support checked at construction"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envy::welfare_max_step;
    use crate::types::{max_envy, AllocationState};

    #[test]
    fn scaled_vectors_in_unit_ball() {
        for d in [1, 2, 5, 17] {
            for v in iid_vector_source(d, 2_000, VectorScale::InvSqrtD, RngSeed::new(1, d as u64)).unwrap() {
                assert!(v.norm2() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn raw_vectors_can_leave_the_ball() {
        let any_long = iid_vector_source(4, 1_000, VectorScale::Raw, RngSeed::new(1, 0))
            .unwrap()
            .any(|v| v.norm2() > 1.0);
        assert!(any_long);
    }

    #[test]
    fn vector_stream_replays() {
        let a: Vec<_> = iid_vector_source(3, 100, VectorScale::Raw, RngSeed::new(9, 2)).unwrap().collect();
        let b: Vec<_> = iid_vector_source(3, 100, VectorScale::Raw, RngSeed::new(9, 2)).unwrap().collect();
        assert_eq!(a.len(), 100);
        for (x, y) in a.iter().zip(&b) {
            let bits = |v: &VectorItem| v.coords().iter().map(|c| c.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(x), bits(y));
        }
    }

    #[test]
    fn coordinate_mean_is_centered() {
        let mut sum = 0.0;
        let mut count = 0usize;
        for v in iid_vector_source(10, 100_000, VectorScale::Raw, RngSeed::new(4, 0)).unwrap() {
            sum += v.coords().iter().sum::<f64>();
            count += v.dim();
        }
        assert_eq!(count, 1_000_000);
        // 4σ with σ = 1/√3 over 10⁶ draws
        assert!((sum / count as f64).abs() <= 0.0024);
    }

    #[test]
    fn sphere_vectors_are_unit() {
        for v in sphere_vector_source(5, 1_000, RngSeed::new(2, 0)).unwrap() {
            assert!((v.norm2() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn point_mass_items() {
        for item in iid_value_source(3, 50, DistributionSpec::PointMass { x: 1.0 }, RngSeed::new(0, 0)).unwrap() {
            assert_eq!(item.values(), &[1.0, 1.0, 1.0]);
        }
    }

    #[test]
    fn all_zero_items_never_create_envy() {
        let mut rng = RngSeed::new(1, 1).rng();
        let mut state = AllocationState::new(3).unwrap();
        for item in iid_value_source(3, 500, DistributionSpec::Bernoulli { p: 0.0 }, RngSeed::new(1, 0)).unwrap() {
            assert!(item.values().iter().all(|v| *v == 0.0));
            welfare_max_step(&mut state, &item, &mut rng).unwrap();
        }
        assert_eq!(max_envy(&state), 0.0);
        assert_eq!(state.t(), 500);
    }

    #[test]
    fn uniform_values_symmetric_between_agents() {
        let trials = 1_000_000;
        let wins = iid_value_source(2, trials, DistributionSpec::Uniform01, RngSeed::new(6, 0))
            .unwrap()
            .filter(|item| item.values()[0] > item.values()[1])
            .count();
        let sd = (trials as f64 * 0.25).sqrt();
        assert!((wins as f64 - trials as f64 / 2.0).abs() <= 4.0 * sd);
    }

    #[test]
    fn value_source_rejects_signed_support() {
        assert!(iid_value_source(2, 10, DistributionSpec::UniformPm1, RngSeed::new(0, 0)).is_err());
        assert!(iid_value_source(1, 10, DistributionSpec::Uniform01, RngSeed::new(0, 0)).is_err());
    }
}
