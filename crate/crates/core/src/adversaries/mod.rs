//! Input generators.
//!
//! Stochastic sources are iterators seeded by [`RngSeed`](crate::RngSeed);
//! adaptive adversaries are state machines fed with the algorithm's previous
//! decision.

mod adaptive;
mod distribution;
mod iid;
mod orthogonal;
mod replay;

pub use adaptive::{
    astar_policy, oblivious_sampled_instance, oblivious_prefix_len, v_d, AdaptiveLrState, Side,
};
pub use distribution::{DistributionSpec, Sampler};
pub use iid::{
    iid_value_source, iid_vector_source, sphere_vector_source, IidValueSource, IidVectorSource,
    SphereSource, VectorScale,
};
pub use orthogonal::orthogonal_adversary;
pub use replay::replay_source;
