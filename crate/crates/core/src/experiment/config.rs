use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adversaries::{DistributionSpec, VectorScale};
use crate::balancers::default_c_param;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Balance,
    Multicolor,
    Envy,
    Lowerbound,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Greedy,
    RandomSign,
    SelfBalancing,
    ColorTree,
    WelfareMax,
    TwoPhase,
    DiscrepancyTree,
    UniformRandom,
    Astar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdversarySpec {
    IidVector {
        #[serde(default)]
        scale: VectorScale,
    },
    Sphere,
    Orthogonal,
    IidValue {
        dist: DistributionSpec,
    },
    AdaptiveLr,
    Oblivious,
    Replay {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Range { base_seed: u64, count: u64 },
}

impl Seeds {
    /// Distinct seeds in ascending order.
    pub fn values(&self) -> Vec<u64> {
        let mut v: Vec<u64> = match self {
            Seeds::List(v) => v.clone(),
            Seeds::Range { base_seed, count } => (0..*count).map(|i| base_seed.wrapping_add(i)).collect(),
        };
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds::Range {
            base_seed: 0,
            count: 1,
        }
    }
}

/// Probes runnable in `verify` mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "probe", rename_all = "snake_case")]
pub enum ProbeSpec {
    Concentration {
        k: usize,
        l: usize,
        c: u32,
        dist: DistributionSpec,
        trials: u64,
    },
    Halls {
        instances: u64,
    },
    OrderStats {
        n: usize,
        items: usize,
        #[serde(default = "default_order_tolerance")]
        tolerance: f64,
    },
    Orthogonality {
        d: usize,
        delta: f64,
        trials: u64,
        #[serde(default = "default_orthogonality_floor")]
        floor: f64,
    },
    TreeOracle {
        trees: usize,
        #[serde(default = "default_tree_bound")]
        bound: f64,
    },
}

fn default_order_tolerance() -> f64 {
    0.005
}

fn default_orthogonality_floor() -> f64 {
    crate::verify::ORTHOGONALITY_FLOOR
}

fn default_tree_bound() -> f64 {
    3.0
}

fn default_n() -> usize {
    2
}

fn default_d() -> usize {
    1
}

fn default_c() -> f64 {
    1.0
}

fn default_r() -> f64 {
    0.9
}

fn default_delta() -> f64 {
    0.01
}

fn default_record_every() -> usize {
    1
}

fn default_threshold() -> f64 {
    2.0
}

/// One experiment, read from a JSON document. Missing fields take their
/// defaults, and the resolved config is echoed into the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub algorithm: Option<Algorithm>,
    #[serde(default)]
    pub adversary: Option<AdversarySpec>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default, alias = "T")]
    pub horizon: usize,
    #[serde(default)]
    pub seeds: Seeds,
    /// Balancer parameter; `30 ln(2 d T)` when absent.
    #[serde(default)]
    pub c_param: Option<f64>,
    /// Envy-graph threshold of the two-phase allocator.
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_r")]
    pub r: f64,
    /// `K` of the `A*(K)` policy; `⌊√T⌋` when absent.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub t_grid: Vec<usize>,
    /// Writes the generated items of every seed to a stream file.
    #[serde(default)]
    pub emit_stream: bool,
    /// Reported as the fraction of seeds with final metric at most this.
    #[serde(default = "default_threshold")]
    pub success_threshold: f64,
    #[serde(default)]
    pub probes: Vec<ProbeSpec>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn algorithm(&self) -> Result<Algorithm> {
        self.algorithm
            .ok_or_else(|| Error::Config(format!("mode {:?} needs an algorithm", self.mode)))
    }

    pub fn adversary(&self) -> Result<&AdversarySpec> {
        self.adversary
            .as_ref()
            .ok_or_else(|| Error::Config(format!("mode {:?} needs an adversary", self.mode)))
    }

    /// Dimension seen by the balancers.
    pub fn balancer_dim(&self) -> usize {
        match self.algorithm {
            Some(Algorithm::DiscrepancyTree) => self.n,
            _ => self.d,
        }
    }

    pub fn resolved_c_param(&self) -> f64 {
        self.c_param
            .unwrap_or_else(|| default_c_param(self.balancer_dim(), self.horizon.max(1)))
    }

    pub fn resolved_k(&self) -> usize {
        self.k
            .unwrap_or_else(|| ((self.horizon as f64).sqrt().floor() as usize).min(self.horizon / 2))
    }

    /// Fills every defaulted parameter so the echo is self-describing.
    pub fn resolved(&self) -> Self {
        let mut out = self.clone();
        if self.mode != Mode::Verify {
            out.c_param = Some(self.resolved_c_param());
        }
        if matches!(self.algorithm, Some(Algorithm::Astar)) {
            out.k = Some(self.resolved_k());
        }
        out
    }

    /// Rejects unknown combinations and out-of-range parameters before
    /// any run starts.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.record_every == 0 {
            return bad("record_every must be >= 1".into());
        }
        if self.seeds.values().is_empty() {
            return bad("at least one seed is required".into());
        }
        if self.mode == Mode::Verify {
            return Ok(());
        }
        if self.horizon == 0 {
            return bad("horizon T must be >= 1".into());
        }
        if let Some(c) = self.c_param {
            if !(c > 0.0 && c.is_finite()) {
                return bad(format!("c_param = {c} must be positive"));
            }
        }
        let algorithm = self.algorithm()?;
        let adversary = self.adversary()?;
        use AdversarySpec as A;
        use Algorithm as G;
        let algorithm_ok = match self.mode {
            Mode::Balance => matches!(algorithm, G::Greedy | G::RandomSign | G::SelfBalancing),
            Mode::Multicolor => algorithm == G::ColorTree,
            Mode::Envy | Mode::Lowerbound => matches!(
                algorithm,
                G::WelfareMax | G::TwoPhase | G::DiscrepancyTree | G::UniformRandom | G::Astar
            ),
            Mode::Verify => true,
        };
        if !algorithm_ok {
            return bad(format!("algorithm {algorithm:?} is not available in mode {:?}", self.mode));
        }
        let adversary_ok = match self.mode {
            Mode::Balance => matches!(adversary, A::IidVector { .. } | A::Sphere | A::Orthogonal | A::Replay { .. }),
            Mode::Multicolor => matches!(adversary, A::IidVector { .. } | A::Sphere | A::Replay { .. }),
            Mode::Envy => matches!(
                adversary,
                A::IidValue { .. } | A::AdaptiveLr | A::Oblivious | A::Replay { .. }
            ),
            Mode::Lowerbound => matches!(adversary, A::AdaptiveLr | A::Oblivious),
            Mode::Verify => true,
        };
        if !adversary_ok {
            return bad(format!("adversary {adversary:?} is not available in mode {:?}", self.mode));
        }
        match self.mode {
            Mode::Balance | Mode::Multicolor => {
                if self.d == 0 {
                    return bad("d must be >= 1".into());
                }
                if matches!(adversary, A::Orthogonal) && self.d < 2 {
                    return bad("the orthogonal adversary needs d >= 2".into());
                }
                if self.mode == Mode::Multicolor && self.n == 0 {
                    return bad("n must be >= 1".into());
                }
            }
            Mode::Envy | Mode::Lowerbound => {
                if self.n < 2 {
                    return bad("envy experiments need n >= 2".into());
                }
                if matches!(adversary, A::AdaptiveLr | A::Oblivious) && self.n != 2 {
                    return bad("the L/R adversaries are defined for n = 2".into());
                }
                if matches!(adversary, A::AdaptiveLr | A::Oblivious) && !(self.r > 0.0 && self.r < 1.0) {
                    return bad(format!("r = {} outside (0, 1)", self.r));
                }
                if matches!(adversary, A::Oblivious) && !(self.delta > 0.0 && self.delta < 1.0) {
                    return bad(format!("delta = {} outside (0, 1)", self.delta));
                }
                if algorithm == G::Astar {
                    if self.n != 2 {
                        return bad("A*(K) is defined for n = 2".into());
                    }
                    if self.horizon % 2 != 0 {
                        return bad("A*(K) needs an even horizon".into());
                    }
                    if self.resolved_k() > self.horizon / 2 {
                        return bad("K must be at most T/2".into());
                    }
                }
                if algorithm == G::TwoPhase && !(self.c >= 0.0) {
                    return bad(format!("c = {} must be non-negative", self.c));
                }
                if let A::IidValue { dist } = adversary {
                    dist.validate_within(0.0, 1.0)
                        .map_err(|e| Error::Config(e.to_string()))?;
                }
            }
            Mode::Verify => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_defaults() {
        let cfg = ExperimentConfig::from_json(
            r#"{"mode":"envy","algorithm":"two_phase",
                "adversary":{"kind":"iid_value","dist":{"kind":"point_mass","x":1.0}},
                "n":2,"T":10000,"seeds":{"base_seed":7,"count":3}}"#,
        )
        .unwrap();
        assert_eq!(cfg.horizon, 10_000);
        assert_eq!(cfg.seeds.values(), vec![7, 8, 9]);
        assert_eq!(cfg.record_every, 1);
        assert_eq!(cfg.c, 1.0);
        cfg.validate().unwrap();
        let echoed = ExperimentConfig::from_json(&cfg.resolved().to_json()).unwrap();
        assert_eq!(echoed.c_param, Some(default_c_param(1, 10_000)));
    }

    #[test]
    fn seed_list() {
        let cfg = ExperimentConfig::from_json(
            r#"{"mode":"balance","algorithm":"greedy","adversary":{"kind":"orthogonal"},
                "d":4,"T":10,"seeds":[3,1]}"#,
        )
        .unwrap();
        assert_eq!(cfg.seeds.values(), vec![1, 3]);
    }

    #[test]
    fn rejects_unknown_names_and_combinations() {
        assert!(ExperimentConfig::from_json(r#"{"mode":"balance","algorithm":"magic"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"mode":"balance","bogus":1}"#).is_err());
        let cfg = ExperimentConfig::from_json(
            r#"{"mode":"balance","algorithm":"two_phase","adversary":{"kind":"sphere"},"d":3,"T":5}"#,
        )
        .unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let cfg = ExperimentConfig::from_json(
            r#"{"mode":"envy","algorithm":"welfare_max","adversary":{"kind":"adaptive_lr"},"n":3,"T":5}"#,
        )
        .unwrap();
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig::from_json(
            r#"{"mode":"balance","algorithm":"greedy","adversary":{"kind":"sphere"},"d":3,"T":0}"#,
        )
        .unwrap();
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig::from_json(
            r#"{"mode":"balance","algorithm":"greedy","adversary":{"kind":"sphere"},"d":3,"T":4,"record_every":0}"#,
        )
        .unwrap();
        assert!(cfg.validate().is_err());
    }
}
