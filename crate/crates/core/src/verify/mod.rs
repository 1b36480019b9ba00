//! Executable checks: Monte Carlo probes against stated bounds, exhaustive
//! oracles on toy instances, and log-log scaling fits.
//!
//! Probes compare an estimate with a bound plus three binomial standard
//! errors. An estimate above the bound but inside that band passes with
//! `warning` set; beyond the band it fails.

mod concentration;
mod halls;
mod order_stats;
mod orthogonality;
mod phase2;
mod scaling;
mod tree_oracle;

use serde::{Deserialize, Serialize};

pub use concentration::{concentration_bound, concentration_probe};
pub use halls::{halls_check, halls_probe, halls_property_sweep, random_halls_instance, HallsSweep};
pub use order_stats::{order_stat_cdf, order_stat_probe, OrderStat};
pub use orthogonality::{orthogonality_estimate, orthogonality_probe, ORTHOGONALITY_FLOOR};
pub use phase2::phase2_balance_check;
pub use scaling::{scaling_fit, ScalingFit};
pub use tree_oracle::{
    evaluate_selection, random_tiny_tree, tree_oracle_probe, tree_selection_oracle, zero_in_hull, Selection,
    SelectionTree, MAX_SELECTIONS,
};

/// Outcome of one probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub name: String,
    pub empirical: f64,
    pub bound_or_target: f64,
    pub trials: u64,
    pub passed: bool,
    #[serde(default)]
    pub std_error: f64,
    #[serde(default)]
    pub warning: bool,
}

impl ProbeReport {
    /// Upper-bound probe: passes when `empirical ≤ bound + 3 · SE`.
    pub fn upper_bound(name: impl Into<String>, empirical: f64, bound: f64, trials: u64) -> Self {
        let p = bound.clamp(0.0, 1.0);
        let std_error = if trials > 0 {
            (p * (1.0 - p) / trials as f64).sqrt()
        } else {
            0.0
        };
        let passed = empirical <= bound + 3.0 * std_error;
        Self {
            name: name.into(),
            empirical,
            bound_or_target: bound,
            trials,
            passed,
            std_error,
            warning: passed && empirical > bound,
        }
    }

    /// Deterministic comparison `empirical ≤ target` (or `≥` when `at_least`).
    pub fn exact(name: impl Into<String>, empirical: f64, target: f64, trials: u64, at_least: bool) -> Self {
        let passed = if at_least {
            empirical >= target
        } else {
            empirical <= target
        };
        Self {
            name: name.into(),
            empirical,
            bound_or_target: target,
            trials,
            passed,
            std_error: 0.0,
            warning: false,
        }
    }
}
