//! Distribution of agent 1's quantile for items won under welfare
//! maximization with i.i.d. uniform values.
//!
//! `Z₁` is agent 1's value if agent 1 wins the item and `−1` otherwise;
//! `Z₂` is agent 1's value if agent 2 wins it and `−1` otherwise. On `[0, 1]`
//! their CDFs are
//!
//! ```text
//! F¹(x) = (n − 1 + xⁿ) / n
//! F²(x) = (n − 1)/n + (x − xⁿ/n) / (n − 1)
//! ```

use serde::{Deserialize, Serialize};

use super::ProbeReport;
use crate::adversaries::{iid_value_source, DistributionSpec};
use crate::envy::welfare_max_step;
use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::types::AllocationState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderStat {
    F1,
    F2,
}

pub fn order_stat_cdf(which: OrderStat, n: usize, x: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::param("order statistic CDFs need n >= 2"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param(format!("x = {x} outside [0, 1]")));
    }
    let nf = n as f64;
    let xn = x.powi(n as i32);
    Ok(match which {
        OrderStat::F1 => (nf - 1.0 + xn) / nf,
        OrderStat::F2 => (nf - 1.0) / nf + (x - xn / nf) / (nf - 1.0),
    })
}

/// Full CDF of `Z`, including the atom at `−1`.
fn z_cdf(which: OrderStat, n: usize, x: f64) -> f64 {
    if x < -1.0 {
        0.0
    } else if x < 0.0 {
        (n as f64 - 1.0) / n as f64
    } else {
        order_stat_cdf(which, n, x.min(1.0)).expect("domain checked")
    }
}

/// Kolmogorov distance between the sample and the CDF of `Z`.
fn sup_deviation(mut sample: Vec<f64>, which: OrderStat, n: usize) -> f64 {
    sample.sort_by(f64::total_cmp);
    let total = sample.len() as f64;
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < sample.len() {
        let x = sample[i];
        let mut j = i;
        while j < sample.len() && sample[j] == x {
            j += 1;
        }
        let f = z_cdf(which, n, x);
        // left limit of both CDFs, then the value at x
        let f_left = if x == -1.0 { 0.0 } else { f };
        worst = worst.max((i as f64 / total - f_left).abs());
        worst = worst.max((j as f64 / total - f).abs());
        i = j;
    }
    worst
}

/// Runs welfare maximization on `items` uniform items with `n` agents and
/// compares the empirical CDFs of `Z₁` and `Z₂` with `F¹` and `F²`.
/// Passes when the sup distance is at most `tolerance`.
pub fn order_stat_probe(n: usize, items: usize, tolerance: f64, seed: RngSeed) -> Result<Vec<ProbeReport>> {
    let mut state = AllocationState::new(n)?;
    let mut rng = seed.with_stream(1).rng();
    let mut z1 = Vec::with_capacity(items);
    let mut z2 = Vec::with_capacity(items);
    for item in iid_value_source(n, items, DistributionSpec::Uniform01, seed)? {
        let winner = welfare_max_step(&mut state, &item, &mut rng)?;
        let q = item.values()[0];
        z1.push(if winner == 0 { q } else { -1.0 });
        z2.push(if winner == 1 { q } else { -1.0 });
    }
    Ok([(OrderStat::F1, z1), (OrderStat::F2, z2)]
        .into_iter()
        .map(|(which, sample)| {
            let dev = sup_deviation(sample, which, n);
            ProbeReport::exact(format!("order statistic {which:?} n={n}"), dev, tolerance, items as u64, false)
        })
        .collect())
}
