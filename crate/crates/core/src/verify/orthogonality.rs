use rand::Rng;
use rayon::prelude::*;

use super::ProbeReport;
use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// Regression floor for `d = 3`, `δ = 0.1`.
pub const ORTHOGONALITY_FLOOR: f64 = 0.01;

const CHUNK: u64 = 1 << 16;

/// Monte Carlo estimate of
/// `Pr_{v ∼ U[−1,1]^d}[|⟨v,u⟩| ≤ δ‖u‖₂ and ‖v‖₂ ∈ [1/2, 1]]` with `u` the
/// all-ones vector. Trials are split into fixed chunks, each with its own
/// stream, so the result does not depend on the thread count.
pub fn orthogonality_estimate(d: usize, delta: f64, trials: u64, seed: RngSeed) -> Result<f64> {
    if d < 3 {
        return Err(Error::param(format!("orthogonality probe needs d >= 3, got {d}")));
    }
    if !(delta > 0.0) {
        return Err(Error::param(format!("delta = {delta} must be positive")));
    }
    if trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    let u_norm = (d as f64).sqrt();
    let chunks = trials.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = seed.with_stream(chunk).rng();
            let len = CHUNK.min(trials - chunk * CHUNK);
            let mut v = vec![0.0; d];
            let mut hits = 0u64;
            for _ in 0..len {
                for x in v.iter_mut() {
                    *x = rng.random_range(-1.0..=1.0);
                }
                let inner: f64 = v.iter().sum();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if inner.abs() <= delta * u_norm && (0.5..=1.0).contains(&norm) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(hits as f64 / trials as f64)
}

/// Passes when the estimate is at least `floor`.
pub fn orthogonality_probe(d: usize, delta: f64, trials: u64, floor: f64, seed: RngSeed) -> Result<ProbeReport> {
    let est = orthogonality_estimate(d, delta, trials, seed)?;
    Ok(ProbeReport::exact(
        format!("orthogonality d={d} delta={delta}"),
        est,
        floor,
        trials,
        true,
    ))
}
