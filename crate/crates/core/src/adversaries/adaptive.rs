//! The two-agent adaptive adversary and the policies used against it.
//!
//! States form a line `… L₂ L₁ 0 R₁ R₂ …`. In `L_d` the arriving item is
//! valued `(1, v_d)` by agents `(L, R)`, in `R_d` it is `(v_d, 1)`, and at the
//! origin `(1, 1)`, where `v_d = (d + 1)^r − d^r`. Giving the item to `L`
//! moves one state left, giving it to `R` one state right.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::types::ValueItem;

/// Recipient in the two-agent construction; `L` is agent 0, `R` agent 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn agent(self) -> usize {
        match self {
            Side::L => 0,
            Side::R => 1,
        }
    }

    pub fn from_agent(agent: usize) -> Option<Side> {
        match agent {
            0 => Some(Side::L),
            1 => Some(Side::R),
            _ => None,
        }
    }
}

/// `v_d = (d + 1)^r − d^r`.
pub fn v_d(r: f64, d: usize) -> f64 {
    let d = d as f64;
    (d + 1.0).powf(r) - d.powf(r)
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::param(format!("exponent r = {r} outside (0, 1)")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveLrState {
    /// Negative: `L_{-position}`, positive: `R_{position}`, zero: origin.
    position: i64,
    r: f64,
    v_table: Vec<f64>,
}

impl AdaptiveLrState {
    pub fn new(r: f64) -> Result<Self> {
        check_r(r)?;
        Ok(Self {
            position: 0,
            r,
            v_table: vec![1.0],
        })
    }

    pub fn position(&self) -> i64 {
        self.position
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Memoized `v_d`.
    pub fn v(&mut self, d: usize) -> f64 {
        while self.v_table.len() <= d {
            let next = v_d(self.r, self.v_table.len());
            self.v_table.push(next);
        }
        self.v_table[d]
    }

    /// Item the adversary offers in the current state.
    pub fn current_item(&mut self) -> ValueItem {
        let depth = self.position.unsigned_abs() as usize;
        let v = self.v(depth);
        let values = match self.position.signum() {
            -1 => vec![1.0, v],
            1 => vec![v, 1.0],
            _ => vec![1.0, 1.0],
        };
        ValueItem::new(values).expect("v_d lies in (0, 1]")
    }

    /// Moves according to the previous recipient, then emits the next item.
    pub fn step(&mut self, last_recipient: Option<Side>) -> ValueItem {
        match last_recipient {
            Some(Side::L) => self.position -= 1,
            Some(Side::R) => self.position += 1,
            None => {}
        }
        self.current_item()
    }
}

/// The `A*(K)` allocation: `K` steps to `L`, then `T′ − 2K` steps
/// alternating `R, L`, then `K` steps to `R`.
pub fn astar_policy(t_prime: usize, k: usize, step_index: usize) -> Result<Side> {
    if t_prime % 2 != 0 {
        return Err(Error::param(format!("T' = {t_prime} must be even")));
    }
    if k > t_prime / 2 {
        return Err(Error::param(format!("K = {k} exceeds T'/2 = {}", t_prime / 2)));
    }
    if step_index >= t_prime {
        return Err(Error::param(format!("step {step_index} outside [0, {t_prime})")));
    }
    Ok(if step_index < k {
        Side::L
    } else if step_index >= t_prime - k {
        Side::R
    } else if (step_index - k) % 2 == 0 {
        Side::R
    } else {
        Side::L
    })
}

/// `⌈log₂(1/δ)⌉`, the number of adversarial steps before zero padding.
pub fn oblivious_prefix_len(delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta = {delta} outside (0, 1)")));
    }
    Ok((1.0 / delta).log2().ceil() as usize)
}

/// One instance of the oblivious lower-bound distribution: the adaptive
/// machine is run against uniformly random allocations for
/// `⌈log₂(1/δ)⌉` steps and the stream is padded to length `T` with items
/// every agent values at zero.
pub fn oblivious_sampled_instance(
    horizon: usize,
    delta: f64,
    r: f64,
    seed: RngSeed,
) -> Result<Vec<ValueItem>> {
    let prefix = oblivious_prefix_len(delta)?.min(horizon);
    let mut adversary = AdaptiveLrState::new(r)?;
    let mut rng = seed.rng();
    let mut items = Vec::with_capacity(horizon);
    let mut last = None;
    for _ in 0..prefix {
        items.push(adversary.step(last));
        last = Some(if rng.random::<bool>() { Side::L } else { Side::R });
    }
    items.resize(horizon, ValueItem::zeros(2));
    Ok(items)
}
