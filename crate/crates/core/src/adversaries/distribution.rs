use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar distributions for value and coordinate draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    Uniform01,
    UniformPm1,
    Bernoulli { p: f64 },
    Beta { a: f64, b: f64 },
    PointMass { x: f64 },
    /// `x` with probability `p`, otherwise `y`.
    TwoPoint { x: f64, y: f64, p: f64 },
}

impl DistributionSpec {
    /// Smallest interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            DistributionSpec::Uniform01 => (0.0, 1.0),
            DistributionSpec::UniformPm1 => (-1.0, 1.0),
            DistributionSpec::Bernoulli { .. } => (0.0, 1.0),
            DistributionSpec::Beta { .. } => (0.0, 1.0),
            DistributionSpec::PointMass { x } => (x, x),
            DistributionSpec::TwoPoint { x, y, .. } => (x.min(y), x.max(y)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        let ok = match *self {
            DistributionSpec::Uniform01 | DistributionSpec::UniformPm1 => true,
            DistributionSpec::Bernoulli { p } => prob(p),
            DistributionSpec::Beta { a, b } => a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite(),
            DistributionSpec::PointMass { x } => x.is_finite(),
            DistributionSpec::TwoPoint { x, y, p } => x.is_finite() && y.is_finite() && prob(p),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!("invalid distribution parameters: {self:?}")))
        }
    }

    /// Validates and additionally requires the support to lie in `[lo, hi]`.
    pub fn validate_within(&self, lo: f64, hi: f64) -> Result<()> {
        self.validate()?;
        let (a, b) = self.support();
        if a < lo || b > hi {
            return Err(Error::param(format!(
                "support [{a}, {b}] of {self:?} is not within [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    pub fn sampler(&self) -> Result<Sampler> {
        self.validate()?;
        let beta = match *self {
            DistributionSpec::Beta { a, b } => {
                Some(Beta::new(a, b).map_err(|e| Error::param(e.to_string()))?)
            }
            _ => None,
        };
        Ok(Sampler { spec: *self, beta })
    }
}

/// Validated, ready-to-draw form of a [`DistributionSpec`].
#[derive(Debug, Clone)]
pub struct Sampler {
    spec: DistributionSpec,
    beta: Option<Beta<f64>>,
}

impl Sampler {
    pub fn spec(&self) -> DistributionSpec {
        self.spec
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.spec {
            DistributionSpec::Uniform01 => rng.random::<f64>(),
            DistributionSpec::UniformPm1 => rng.random_range(-1.0..=1.0),
            DistributionSpec::Bernoulli { p } => {
                if rng.random::<f64>() < p {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionSpec::Beta { .. } => self
                .beta
                .as_ref()
                .expect("beta sampler is built with the spec")
                .sample(rng),
            DistributionSpec::PointMass { x } => x,
            DistributionSpec::TwoPoint { x, y, p } => {
                if rng.random::<f64>() < p {
                    x
                } else {
                    y
                }
            }
        }
    }
}
