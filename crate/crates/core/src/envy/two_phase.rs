//! Two-phase allocator for i.i.d. values.
//!
//! Phase 1 (the first `T1 = T − n(n−1)/2 · L` items, `L = ⌈ln T · √T⌉`) is
//! plain welfare maximization. In phase 2 the allocator only looks at
//! how many phase-2 items each agent has received (`w`): it restricts
//! attention to the smallest group of agents that trail everyone else by
//! at least `L` items, and gives the item to the member of that group who is
//! envied least by the group. Item values are never read in phase 2.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::{envy_graph_edges, is_acyclic};
use super::welfare::welfare_max_step;
use crate::error::{Error, Result};
use crate::types::{AllocationState, ValueItem};

/// `L = ⌈ln T · √T⌉` (natural logarithm).
pub fn phase_threshold(horizon: usize) -> usize {
    let t = horizon.max(1) as f64;
    (t.ln() * t.sqrt()).ceil() as usize
}

/// Counters filled in while a two-phase run is in progress.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPhaseMonitors {
    /// Steps with `t ≥ T1` whose envy graph at threshold `c` had a cycle.
    pub acyclicity_violations: usize,
    /// Phase-2 steps where the receipt counts broke the balance bounds.
    pub balance_violations: usize,
    pub graph_checks: usize,
    pub balance_checks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPhaseState {
    alloc: AllocationState,
    horizon: usize,
    c: f64,
    monitors: TwoPhaseMonitors,
    last_acyclic: bool,
    last_balanced: bool,
}

impl TwoPhaseState {
    pub fn new(n: usize, horizon: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("the two-phase allocator needs n >= 2"));
        }
        if horizon == 0 {
            return Err(Error::param("horizon must be positive"));
        }
        if c.is_nan() || c < 0.0 {
            return Err(Error::param(format!("envy constant c = {c} must be non-negative")));
        }
        let threshold = phase_threshold(horizon);
        let phase2 = n * (n - 1) / 2 * threshold;
        let phase1_len = horizon.saturating_sub(phase2);
        Ok(Self {
            alloc: AllocationState::with_phases(n, phase1_len, threshold)?,
            horizon,
            c,
            monitors: TwoPhaseMonitors::default(),
            last_acyclic: true,
            last_balanced: true,
        })
    }

    /// Wraps an existing allocation. Used to start from a prepared state.
    pub fn from_allocation(alloc: AllocationState, horizon: usize, c: f64) -> Self {
        Self {
            alloc,
            horizon,
            c,
            monitors: TwoPhaseMonitors::default(),
            last_acyclic: true,
            last_balanced: true,
        }
    }

    pub fn alloc(&self) -> &AllocationState {
        &self.alloc
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn phase1_len(&self) -> usize {
        self.alloc.phase1_len()
    }

    pub fn threshold(&self) -> usize {
        self.alloc.threshold()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn monitors(&self) -> TwoPhaseMonitors {
        self.monitors
    }

    /// Phase 1 is empty because the horizon is too short.
    pub fn phase1_skipped(&self) -> bool {
        self.phase1_len() == 0
    }

    /// Acyclicity of the envy graph after the most recent monitored step.
    pub fn last_acyclic(&self) -> bool {
        self.last_acyclic
    }

    pub fn last_balanced(&self) -> bool {
        self.last_balanced
    }

    /// Whether the next item falls into phase 2.
    pub fn next_in_phase2(&self) -> bool {
        self.alloc.t() >= self.phase1_len()
    }

    /// Smallest set `S` with `w_i ≤ w_j − L` for every `i ∈ S`, `j ∉ S`,
    /// returned in increasing `w` order (ties by agent index).
    pub fn active_set(&self) -> Result<Vec<usize>> {
        if !self.next_in_phase2() {
            return Err(Error::WrongPhase(format!(
                "active set requested at t = {} during phase 1 (T1 = {})",
                self.alloc.t() + 1,
                self.phase1_len()
            )));
        }
        Ok(active_set_of(self.alloc.w(), self.threshold() as u64))
    }

    /// Allocates the next item and updates the monitors.
    pub fn step<R: Rng + ?Sized>(&mut self, item: &ValueItem, rng: &mut R) -> Result<usize> {
        if self.alloc.t() >= self.horizon {
            return Err(Error::HorizonExceeded {
                horizon: self.horizon,
            });
        }
        let recipient = if self.next_in_phase2() {
            let recipient = self.least_envied_active()?;
            self.alloc.update(item, recipient)?;
            recipient
        } else {
            welfare_max_step(&mut self.alloc, item, rng)?
        };
        self.observe();
        Ok(recipient)
    }

    /// Phase-2 choice; depends only on `w` and the current envies.
    fn least_envied_active(&self) -> Result<usize> {
        let mut active = self.active_set()?;
        active.sort_unstable();
        let mut best = active[0];
        let mut best_score = f64::INFINITY;
        for &i in &active {
            let score = active
                .iter()
                .map(|&j| self.alloc.envy(j, i))
                .fold(f64::NEG_INFINITY, f64::max);
            if score < best_score {
                best_score = score;
                best = i;
            }
        }
        Ok(best)
    }

    fn observe(&mut self) {
        let t = self.alloc.t();
        if t >= self.phase1_len() {
            self.monitors.graph_checks += 1;
            self.last_acyclic = is_acyclic(&envy_graph_edges(&self.alloc, self.c));
            if !self.last_acyclic {
                self.monitors.acyclicity_violations += 1;
            }
        }
        if t > self.phase1_len() {
            self.monitors.balance_checks += 1;
            self.last_balanced = balance_holds(self.alloc.w(), self.threshold() as u64);
            if !self.last_balanced {
                self.monitors.balance_violations += 1;
            }
        }
    }
}

pub(crate) fn active_set_of(w: &[u64], threshold: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&i| (w[i], i));
    for j in 1..order.len() {
        if w[order[j - 1]] + threshold <= w[order[j]] {
            order.truncate(j);
            break;
        }
    }
    order
}

/// Sorted adjacent gaps at most `L`, largest count at most `(n − 1) L`.
pub(crate) fn balance_holds(w: &[u64], threshold: u64) -> bool {
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    let gaps_ok = sorted.windows(2).all(|p| p[1] - p[0] <= threshold);
    let max_ok = sorted
        .last()
        .is_none_or(|&m| m <= (w.len() as u64 - 1) * threshold);
    gaps_ok && max_ok
}
