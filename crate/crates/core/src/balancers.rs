//! Online two-way balancing rules.
//!
//! Every rule looks at the running signed sum `d_vec` and the arriving vector
//! `v`, picks a sign (or, for [`BalancerState::weighted_choice`], one of two
//! weights) and adds the signed vector to `d_vec`.
//!
//! The self-balancing and weighted rules are probabilistic: they choose the
//! option that pushes `d_vec` back towards the origin with probability that
//! grows linearly in `⟨d_vec, v⟩ / c_param`. When that probability leaves
//! `[0, 1]` it is clamped and `clamp_count` is incremented.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{dot, VectorItem};

/// `⟨d_vec, v⟩` values this close to zero count as a greedy tie.
pub const GREEDY_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Default probability-slope scale `30 · ln(2 · max(d, 2) · T)`.
pub fn default_c_param(d: usize, horizon: usize) -> f64 {
    30.0 * (2.0 * d.max(2) as f64 * horizon.max(1) as f64).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancerState {
    d_vec: Vec<f64>,
    t: usize,
    c_param: f64,
    clamp_count: usize,
}

impl BalancerState {
    pub fn new(d: usize, c_param: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("balancer dimension must be at least 1"));
        }
        if !(c_param.is_finite() && c_param > 0.0) {
            return Err(Error::param(format!("c_param must be positive, got {c_param}")));
        }
        Ok(Self {
            d_vec: vec![0.0; d],
            t: 0,
            c_param,
            clamp_count: 0,
        })
    }

    pub fn d_vec(&self) -> &[f64] {
        &self.d_vec
    }

    pub fn dim(&self) -> usize {
        self.d_vec.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn c_param(&self) -> f64 {
        self.c_param
    }

    pub fn clamp_count(&self) -> usize {
        self.clamp_count
    }

    fn check_dim(&self, v: &VectorItem) -> Result<()> {
        if v.dim() != self.d_vec.len() {
            return Err(Error::DimensionMismatch {
                expected: self.d_vec.len(),
                got: v.dim(),
            });
        }
        Ok(())
    }

    fn check_input(&self, v: &VectorItem) -> Result<()> {
        self.check_dim(v)?;
        v.check_unit_ball()
    }

    fn apply(&mut self, weight: f64, v: &VectorItem) {
        for (d, x) in self.d_vec.iter_mut().zip(v.coords()) {
            *d += weight * x;
        }
        self.t += 1;
    }

    /// Probability clamped into `[0, 1]`, counting the clamp.
    fn clamp_probability(&mut self, p: f64) -> f64 {
        if !(0.0..=1.0).contains(&p) {
            self.clamp_count += 1;
        }
        p.clamp(0.0, 1.0)
    }

    /// Sign that minimizes `‖d_vec + χ v‖₂`; ties go to `+1`.
    pub fn greedy_sign(&mut self, v: &VectorItem) -> Result<Sign> {
        self.check_input(v)?;
        let inner = v.dot(&self.d_vec);
        let sign = if inner > GREEDY_TIE_TOLERANCE {
            Sign::Minus
        } else {
            Sign::Plus
        };
        self.apply(sign.as_f64(), v);
        Ok(sign)
    }

    /// Fair coin, independent of the state.
    pub fn random_sign<R: Rng + ?Sized>(&mut self, v: &VectorItem, rng: &mut R) -> Result<Sign> {
        self.check_dim(v)?;
        let sign = if rng.random::<bool>() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        self.apply(sign.as_f64(), v);
        Ok(sign)
    }

    /// `+1` with probability `1/2 − ⟨d_vec, v⟩ / (2 c_param)`, clamped.
    pub fn self_balancing_sign<R: Rng + ?Sized>(
        &mut self,
        v: &VectorItem,
        rng: &mut R,
    ) -> Result<Sign> {
        self.check_input(v)?;
        let p = self.self_balancing_probability(v);
        let p = self.clamp_probability(p);
        let sign = if rng.random::<f64>() < p {
            Sign::Plus
        } else {
            Sign::Minus
        };
        self.apply(sign.as_f64(), v);
        Ok(sign)
    }

    /// Unclamped probability of `+1` under the self-balancing rule.
    pub fn self_balancing_probability(&self, v: &VectorItem) -> f64 {
        0.5 - v.dot(&self.d_vec) / (2.0 * self.c_param)
    }

    /// Returns weight `1 − α` with probability `α (1 − ⟨d_vec, v⟩ / c_param)`
    /// (clamped), otherwise `−α`, and adds `weight · v` to the state.
    ///
    /// At `d_vec = 0` the expected increment `p(1 − α) − (1 − p)α = p − α`
    /// is zero; away from the origin it is `−(α / c_param) ⟨d_vec, v⟩ v`.
    pub fn weighted_choice<R: Rng + ?Sized>(
        &mut self,
        v: &VectorItem,
        alpha: f64,
        rng: &mut R,
    ) -> Result<f64> {
        check_alpha(alpha)?;
        self.check_input(v)?;
        let p = self.weighted_probability(v, alpha);
        let p = self.clamp_probability(p);
        let weight = if rng.random::<f64>() < p {
            1.0 - alpha
        } else {
            -alpha
        };
        self.apply(weight, v);
        Ok(weight)
    }

    /// Unclamped probability of the `1 − α` outcome.
    pub fn weighted_probability(&self, v: &VectorItem, alpha: f64) -> f64 {
        alpha * (1.0 - dot(v.coords(), &self.d_vec) / self.c_param)
    }
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    // 2/3 itself is computed as ceil(k/2)/k = 2/3 in floating point
    if !(0.5..=2.0 / 3.0).contains(&alpha) {
        return Err(Error::param(format!("alpha {alpha} outside [1/2, 2/3]")));
    }
    Ok(())
}

/// Signing rules selectable by name in experiment configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigningRule {
    Greedy,
    Random,
    SelfBalancing,
}

impl SigningRule {
    pub fn sign<R: Rng + ?Sized>(
        self,
        state: &mut BalancerState,
        v: &VectorItem,
        rng: &mut R,
    ) -> Result<Sign> {
        match self {
            SigningRule::Greedy => state.greedy_sign(v),
            SigningRule::Random => state.random_sign(v, rng),
            SigningRule::SelfBalancing => state.self_balancing_sign(v, rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;

    fn vi(c: &[f64]) -> VectorItem {
        VectorItem::new(c.to_vec()).unwrap()
    }

    fn state_at(d_vec: &[f64], c: f64) -> BalancerState {
        let mut s = BalancerState::new(d_vec.len(), c).unwrap();
        s.d_vec = d_vec.to_vec();
        s
    }

    #[test]
    fn greedy_examples() {
        let mut s = state_at(&[0.0, 0.0], 1.0);
        assert_eq!(s.greedy_sign(&vi(&[1.0, 0.0])).unwrap(), Sign::Plus);

        let mut s = state_at(&[1.0, 0.0], 1.0);
        assert_eq!(s.greedy_sign(&vi(&[1.0, 0.0])).unwrap(), Sign::Minus);
        assert_eq!(s.d_vec(), &[0.0, 0.0]);

        // oracle: compare both candidate norms directly
        let d = [0.3f64, 0.4];
        let v = [0.6f64, -0.8];
        let plus = ((d[0] + v[0]).powi(2) + (d[1] + v[1]).powi(2)).sqrt();
        let minus = ((d[0] - v[0]).powi(2) + (d[1] - v[1]).powi(2)).sqrt();
        assert!(plus < minus);
        let mut s = state_at(&d, 1.0);
        assert_eq!(s.greedy_sign(&vi(&v)).unwrap(), Sign::Plus);
    }

    #[test]
    fn greedy_rejects_long_vectors() {
        let mut s = BalancerState::new(2, 1.0).unwrap();
        assert!(matches!(
            s.greedy_sign(&vi(&[1.0, 1.0])),
            Err(Error::NormViolation { .. })
        ));
        assert_eq!(s.t(), 0);
    }

    #[test]
    fn random_sign_replays() {
        let v = vi(&[0.5, 0.5]);
        let run = || {
            let mut rng = RngSeed::new(11, 0).rng();
            let mut s = BalancerState::new(2, 1.0).unwrap();
            (0..200).map(|_| s.random_sign(&v, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn random_sign_mean_is_centered() {
        let v = vi(&[1.0]);
        let mut rng = RngSeed::new(5, 0).rng();
        let mut s = BalancerState::new(1, 1.0).unwrap();
        let trials = 1_000_000;
        let mut total = 0.0;
        for _ in 0..trials {
            total += s.random_sign(&v, &mut rng).unwrap().as_f64();
        }
        assert!((total / trials as f64).abs() <= 0.004);
        assert!((s.d_vec()[0] - total).abs() < 1e-9);
    }

    #[test]
    fn opposite_pairs_cancel() {
        let mut s = state_at(&[0.0, 0.0, 0.0], 1.0);
        let v = [0.25, -0.5, 0.125];
        let w = [-0.25, 0.5, -0.125];
        // greedy: first +v, then w has ⟨d, w⟩ < 0 so it is also taken with +1
        s.greedy_sign(&vi(&v)).unwrap();
        s.greedy_sign(&vi(&w)).unwrap();
        assert_eq!(s.d_vec(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn self_balancing_probability_boundaries() {
        let s = BalancerState::new(2, 3.0).unwrap();
        assert_eq!(s.self_balancing_probability(&vi(&[0.6, 0.8])), 0.5);

        // ⟨d, v⟩ = c_param
        let mut s = state_at(&[3.0, 0.0], 3.0);
        let v = vi(&[1.0, 0.0]);
        assert_eq!(s.self_balancing_probability(&v), 0.0);
        let mut rng = RngSeed::new(1, 0).rng();
        assert_eq!(s.self_balancing_sign(&v, &mut rng).unwrap(), Sign::Minus);
        assert_eq!(s.clamp_count(), 0);
    }

    #[test]
    fn self_balancing_counts_clamps() {
        let mut s = state_at(&[10.0], 1.0);
        let mut rng = RngSeed::new(1, 0).rng();
        assert_eq!(s.self_balancing_sign(&vi(&[1.0]), &mut rng).unwrap(), Sign::Minus);
        assert_eq!(s.clamp_count(), 1);
        assert!(s.clamp_count() <= s.t());
    }

    #[test]
    fn self_balancing_drift_matches_identity() {
        // E[⟨d_{t+1} − d_t, d_t⟩ | d_t] = −⟨d_t, v⟩² / c_param when unclamped
        let d = [0.9, -0.4, 0.2];
        let v = vi(&[0.3, 0.5, -0.6]);
        let c = 2.0;
        let inner = v.dot(&d);
        let expected = -inner * inner / c;
        let mut rng = RngSeed::new(99, 0).rng();
        let draws = 100_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..draws {
            let mut s = state_at(&d, c);
            let sign = s.self_balancing_sign(&v, &mut rng).unwrap();
            let x = sign.as_f64() * inner;
            sum += x;
            sum_sq += x * x;
        }
        let mean = sum / draws as f64;
        let sd = ((sum_sq / draws as f64 - mean * mean) / draws as f64).sqrt();
        assert!((mean - expected).abs() <= 3.0 * sd, "mean {mean} vs {expected} (sd {sd})");
    }

    #[test]
    fn weighted_choice_probabilities() {
        let s = BalancerState::new(2, 1.0).unwrap();
        assert_eq!(s.weighted_probability(&vi(&[0.6, 0.8]), 0.5), 0.5);
        let s = state_at(&[0.8, -0.6], 1.0);
        let p = s.weighted_probability(&vi(&[0.6, 0.8]), 2.0 / 3.0);
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_choice_zero_mean_at_origin() {
        // α(1−α)v + (1−α)(−α)v = 0
        let alpha: f64 = 0.5;
        assert_eq!(alpha * (1.0 - alpha) - (1.0 - alpha) * alpha, 0.0);
        let v = vi(&[1.0]);
        let mut rng = RngSeed::new(3, 0).rng();
        let trials = 1_000_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let mut s = BalancerState::new(1, 10.0).unwrap();
            let w = s.weighted_choice(&v, 0.6, &mut rng).unwrap();
            sum += w;
            sum_sq += w * w;
        }
        let mean = sum / trials as f64;
        let sd = ((sum_sq / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert!(mean.abs() <= 4.0 * sd, "mean {mean}, sd {sd}");
    }

    #[test]
    fn weighted_choice_rejects_alpha() {
        let mut s = BalancerState::new(1, 1.0).unwrap();
        let mut rng = RngSeed::new(3, 0).rng();
        assert!(s.weighted_choice(&vi(&[0.1]), 0.4, &mut rng).is_err());
        assert!(s.weighted_choice(&vi(&[0.1]), 0.7, &mut rng).is_err());
        assert!(s.weighted_choice(&vi(&[0.1]), 2.0 / 3.0, &mut rng).is_ok());
    }

    #[test]
    fn half_weights_reproduce_self_balancing() {
        // At α = 1/2 the weighted walk is the sign walk scaled by 1/2, so it
        // takes the same decisions when its slope scale is halved too.
        let c = 4.0;
        let mut sb = BalancerState::new(3, c).unwrap();
        let mut wc = BalancerState::new(3, c / 2.0).unwrap();
        let mut rng_a = RngSeed::new(21, 0).rng();
        let mut rng_b = RngSeed::new(21, 0).rng();
        let mut src = RngSeed::new(22, 0).rng();
        for _ in 0..10_000 {
            let raw: Vec<f64> = (0..3).map(|_| src.random_range(-1.0..1.0) / 3f64.sqrt()).collect();
            let v = vi(&raw);
            let sign = sb.self_balancing_sign(&v, &mut rng_a).unwrap();
            let w = wc.weighted_choice(&v, 0.5, &mut rng_b).unwrap();
            assert_eq!(sign.as_f64() * 0.5, w);
        }
        for (a, b) in sb.d_vec().iter().zip(wc.d_vec()) {
            assert_eq!(a * 0.5, *b);
        }
    }

    #[test]
    fn state_tracks_weighted_sum() {
        let mut s = BalancerState::new(2, 5.0).unwrap();
        let mut rng = RngSeed::new(8, 0).rng();
        let mut expected = [0.0, 0.0];
        for k in 0..500 {
            let v = vi(&[(k as f64 * 0.37).sin() * 0.7, (k as f64 * 0.11).cos() * 0.7]);
            let w = match k % 4 {
                0 => s.greedy_sign(&v).unwrap().as_f64(),
                1 => s.random_sign(&v, &mut rng).unwrap().as_f64(),
                2 => s.self_balancing_sign(&v, &mut rng).unwrap().as_f64(),
                _ => s.weighted_choice(&v, 0.6, &mut rng).unwrap(),
            };
            expected[0] += w * v.coords()[0];
            expected[1] += w * v.coords()[1];
        }
        assert_eq!(s.t(), 500);
        assert!(s.clamp_count() <= s.t());
        for (a, b) in s.d_vec().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
