use rayon::prelude::*;

use super::ProbeReport;
use crate::adversaries::DistributionSpec;
use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// `4 · (2eL/K)^{c+1}`.
pub fn concentration_bound(k: usize, l: usize, c: u32) -> f64 {
    4.0 * (2.0 * std::f64::consts::E * l as f64 / k as f64).powi(c as i32 + 1)
}

/// Estimates `Pr[Σ_{i ≤ K−L} Y_i − Σ_{i > K−L} Y_i < −c]` for i.i.d. `Y_i`
/// and compares it with [`concentration_bound`].
///
/// Trial `i` draws from stream `i` of `seed`, so the estimate does not depend
/// on how trials are scheduled.
pub fn concentration_probe(
    k: usize,
    l: usize,
    c: u32,
    dist: DistributionSpec,
    trials: u64,
    seed: RngSeed,
) -> Result<ProbeReport> {
    if k == 0 || l == 0 || c == 0 {
        return Err(Error::param("K, L and c must be positive integers"));
    }
    if (l as f64) >= k as f64 / (4.0 * std::f64::consts::E) {
        return Err(Error::param(format!("need L < K/(4e); got K = {k}, L = {l}")));
    }
    dist.validate_within(0.0, 1.0)?;
    let sampler = dist.sampler()?;
    let head = k - l;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let mut rng = seed.with_stream(trial).rng();
            let mut diff = 0.0;
            for i in 0..k {
                let y = sampler.sample(&mut rng);
                if i < head {
                    diff += y;
                } else {
                    diff -= y;
                }
            }
            diff < -(c as f64)
        })
        .count();
    let estimate = hits as f64 / trials.max(1) as f64;
    Ok(ProbeReport::upper_bound(
        format!("concentration K={k} L={l} c={c} {dist:?}"),
        estimate,
        concentration_bound(k, l, c),
        trials,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_value() {
        let b = concentration_bound(1000, 10, 2);
        let hand = 4.0 * (2.0 * std::f64::consts::E * 0.01f64).powi(3);
        assert!((b - hand).abs() < 1e-18);
        assert!((b - 6.43e-4).abs() < 5e-6, "{b}");
    }

    #[test]
    fn degenerate_distributions_never_trigger() {
        for x in [0.0, 1.0] {
            let r = concentration_probe(1000, 10, 2, DistributionSpec::PointMass { x }, 2_000, RngSeed::new(1, 0)).unwrap();
            assert_eq!(r.empirical, 0.0);
            assert!(r.passed);
        }
    }

    #[test]
    fn rejects_large_l() {
        // K/(4e) ≈ 9.2 for K = 100
        assert!(concentration_probe(100, 10, 1, DistributionSpec::Uniform01, 10, RngSeed::new(0, 0)).is_err());
        assert!(concentration_probe(100, 9, 1, DistributionSpec::Uniform01, 10, RngSeed::new(0, 0)).is_ok());
        assert!(concentration_probe(100, 9, 0, DistributionSpec::Uniform01, 10, RngSeed::new(0, 0)).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let a = concentration_probe(40, 3, 1, DistributionSpec::Bernoulli { p: 0.05 }, 5_000, RngSeed::new(3, 0)).unwrap();
        let b = concentration_probe(40, 3, 1, DistributionSpec::Bernoulli { p: 0.05 }, 5_000, RngSeed::new(3, 0)).unwrap();
        assert_eq!(a, b);
        assert!(a.empirical > 0.0);
    }
}
