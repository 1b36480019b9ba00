//! Simulation laboratory for online multicolor discrepancy and online envy
//! minimization.
//!
//! The crate is organised around streams: an adversary (stochastic, adaptive,
//! oblivious or replayed) produces items one at a time, and an online
//! algorithm commits to a color or a recipient before the next item arrives.
//!
//! - [`types`]: shared domain types and the elementary metrics
//!   (pairwise discrepancy, maximum envy).
//! - [`balancers`]: two-way signing rules (greedy, random, self-balancing,
//!   weighted).
//! - [`multicolor`]: binary tree of weighted balancers routing vectors to
//!   `n` colors.
//! - [`envy`]: welfare maximization, the two-phase allocator, the
//!   tree-based allocator and envy graphs.
//! - [`adversaries`]: input generators and stream replay.
//! - [`verify`]: Monte Carlo probes, exact oracles and scaling fits.
//! - [`experiment`]: configuration, seeded runs, sweeps and CSV/JSON output.

pub mod adversaries;
pub mod balancers;
pub mod envy;
pub mod error;
pub mod experiment;
pub mod multicolor;
pub mod rng;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use rng::RngSeed;
pub use types::{
    max_envy, pairwise_max_discrepancy, AllocationState, DiscrepancyState, ExperimentRecord,
    ValueItem, VectorItem,
};
