//! Online envy minimization.
//!
//! Allocators take the shared [`AllocationState`](crate::AllocationState),
//! pick a recipient for the arriving item and record the allocation.

mod graph;
mod tree_alloc;
pub(crate) mod two_phase;
mod welfare;

pub use graph::{envy_graph_edges, is_acyclic, EnvyGraph};
pub use tree_alloc::DiscrepancyAllocator;
pub use two_phase::{phase_threshold, TwoPhaseMonitors, TwoPhaseState};
pub use welfare::{random_step, welfare_max_step};
