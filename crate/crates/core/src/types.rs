//! Domain types shared by every module, and the two elementary metrics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on `‖v‖₂ ≤ 1` before a balancer input is rejected.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Absolute slack on envy comparisons: `ENVY > c` is evaluated as
/// `ENVY > c + ENVY_TOLERANCE`.
pub const ENVY_TOLERANCE: f64 = 1e-9;

/// One arriving vector in the discrepancy problems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorItem {
    coords: Vec<f64>,
}

impl VectorItem {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::param("vector must have at least one coordinate"));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("vector coordinates must be finite"));
        }
        Ok(Self { coords })
    }

    /// Like [`VectorItem::new`] but additionally requires `‖v‖₂ ≤ 1`.
    pub fn unit_ball(coords: Vec<f64>) -> Result<Self> {
        let v = Self::new(coords)?;
        v.check_unit_ball()?;
        Ok(v)
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            coords: vec![0.0; d.max(1)],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm2(&self) -> f64 {
        self.norm2_sq().sqrt()
    }

    pub fn norm2_sq(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.coords)
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.coords, other)
    }

    pub fn check_unit_ball(&self) -> Result<()> {
        let norm = self.norm2();
        if norm > 1.0 + NORM_TOLERANCE {
            return Err(Error::NormViolation { norm });
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|x| x * factor).collect(),
        }
    }
}

/// One arriving item in the envy problems: agent `i` values it at `values[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueItem {
    values: Vec<f64>,
}

impl ValueItem {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::param("value items need at least two agents"));
        }
        if let Some(bad) = values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::param(format!("agent value {bad} outside [0, 1]")));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n.max(2)],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Extends a two-agent item to `n` agents who all value it at zero.
    pub fn padded(&self, n: usize) -> Self {
        let mut values = self.values.clone();
        if values.len() < n {
            values.resize(n, 0.0);
        }
        Self { values }
    }
}

/// Either kind of item, as stored in stream files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StreamEvent {
    Vector(VectorItem),
    Value(ValueItem),
}

/// Running per-color vector sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyState {
    color_sums: Vec<Vec<f64>>,
    t: usize,
}

impl DiscrepancyState {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::param("need at least one color and one dimension"));
        }
        Ok(Self {
            color_sums: vec![vec![0.0; d]; n],
            t: 0,
        })
    }

    /// Builds a state directly from per-color sums.
    pub fn from_sums(color_sums: Vec<Vec<f64>>, t: usize) -> Result<Self> {
        let d = color_sums.first().map(Vec::len).unwrap_or(0);
        if d == 0 || color_sums.iter().any(|s| s.len() != d) {
            return Err(Error::param("color sums must share a positive dimension"));
        }
        Ok(Self { color_sums, t })
    }

    pub fn ingest(&mut self, color: usize, v: &VectorItem) -> Result<()> {
        let n = self.n();
        let sum = self
            .color_sums
            .get_mut(color)
            .ok_or(Error::AgentOutOfRange { index: color, n })?;
        if sum.len() != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: sum.len(),
                got: v.dim(),
            });
        }
        for (s, x) in sum.iter_mut().zip(v.coords()) {
            *s += x;
        }
        self.t += 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.color_sums.len()
    }

    pub fn d(&self) -> usize {
        self.color_sums[0].len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn color_sums(&self) -> &[Vec<f64>] {
        &self.color_sums
    }

    /// Coordinate-wise sum over all colors.
    pub fn total(&self) -> Vec<f64> {
        let mut total = vec![0.0; self.d()];
        for sum in &self.color_sums {
            for (acc, x) in total.iter_mut().zip(sum) {
                *acc += x;
            }
        }
        total
    }
}

/// `max_{i,j} ‖S_i − S_j‖∞` over the color sums.
///
/// Computed per coordinate as the spread between the largest and the
/// smallest color sum, which equals the pairwise maximum.
pub fn pairwise_max_discrepancy(state: &DiscrepancyState) -> f64 {
    let mut best = 0.0f64;
    for k in 0..state.d() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for sum in &state.color_sums {
            lo = lo.min(sum[k]);
            hi = hi.max(sum[k]);
        }
        best = best.max(hi - lo);
    }
    best
}

/// Bundle values `v_i(A_j)` and phase-2 receipt counts of an allocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationState {
    n: usize,
    /// Row-major: entry `i * n + j` is agent `i`'s value for agent `j`'s bundle.
    bundle_values: Vec<f64>,
    w: Vec<u64>,
    t: usize,
    phase1_len: usize,
    threshold: usize,
}

impl AllocationState {
    /// Allocation without a second phase; `w` stays zero forever.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_phases(n, usize::MAX, 0)
    }

    pub fn with_phases(n: usize, phase1_len: usize, threshold: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("need at least one agent"));
        }
        Ok(Self {
            n,
            bundle_values: vec![0.0; n * n],
            w: vec![0; n],
            t: 0,
            phase1_len,
            threshold,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn phase1_len(&self) -> usize {
        self.phase1_len
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn w(&self) -> &[u64] {
        &self.w
    }

    /// `v_i(A_j)`.
    pub fn bundle_value(&self, i: usize, j: usize) -> f64 {
        self.bundle_values[i * self.n + j]
    }

    /// `ENVY_{i,j} = v_i(A_j) − v_i(A_i)`.
    pub fn envy(&self, i: usize, j: usize) -> f64 {
        self.bundle_value(i, j) - self.bundle_value(i, i)
    }

    pub fn in_phase2(&self) -> bool {
        self.t >= self.phase1_len
    }

    /// Gives `item` to `recipient` irrevocably.
    pub fn update(&mut self, item: &ValueItem, recipient: usize) -> Result<()> {
        if item.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: item.n(),
            });
        }
        if recipient >= self.n {
            return Err(Error::AgentOutOfRange {
                index: recipient,
                n: self.n,
            });
        }
        for (i, v) in item.values().iter().enumerate() {
            self.bundle_values[i * self.n + recipient] += v;
        }
        self.t += 1;
        if self.t > self.phase1_len {
            self.w[recipient] += 1;
        }
        Ok(())
    }
}

/// `max_{i≠j} ENVY_{i,j}`, or 0 with a single agent.
pub fn max_envy(state: &AllocationState) -> f64 {
    let n = state.n();
    let mut best = 0.0f64;
    for i in 0..n {
        let own = state.bundle_value(i, i);
        for j in 0..n {
            if i != j {
                best = best.max(state.bundle_value(i, j) - own);
            }
        }
    }
    best
}

/// One row of a trajectory file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub t: usize,
    pub metric: f64,
    pub monitors: BTreeMap<String, f64>,
}

impl ExperimentRecord {
    pub fn new(t: usize, metric: f64) -> Self {
        Self {
            t,
            metric,
            monitors: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.monitors.insert(name.to_string(), value);
        self
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
