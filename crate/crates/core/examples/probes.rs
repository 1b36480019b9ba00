//! Monte Carlo probes of the concentration bound, the Hall-type counting
//! implication, the order-statistic CDFs and the near-orthogonality estimate.
//!
//! cargo run --release --example probes

use discrepancy_lab::adversaries::DistributionSpec;
use discrepancy_lab::verify::{
    concentration_probe, halls_probe, order_stat_probe, orthogonality_probe, ORTHOGONALITY_FLOOR,
};
use discrepancy_lab::RngSeed;

fn main() -> discrepancy_lab::Result<()> {
    let mut reports = vec![
        concentration_probe(1000, 10, 2, DistributionSpec::Uniform01, 100_000, RngSeed::new(1, 0))?,
        concentration_probe(40, 3, 1, DistributionSpec::Bernoulli { p: 0.05 }, 100_000, RngSeed::new(1, 1))?,
        halls_probe(100_000, RngSeed::new(2, 0)),
        orthogonality_probe(3, 0.1, 1_000_000, ORTHOGONALITY_FLOOR, RngSeed::new(3, 0))?,
    ];
    for n in [2, 3, 5] {
        reports.extend(order_stat_probe(n, 1_000_000, 0.005, RngSeed::new(4, n as u64))?);
    }
    for r in reports {
        println!(
            "{:<5} {:<36} empirical {:<12.6} target {:<12.6} trials {}{}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.empirical,
            r.bound_or_target,
            r.trials,
            if r.warning { " (inside noise band)" } else { "" }
        );
    }
    Ok(())
}
