//! Configuration-driven runs: seeds fan out over threads, results come back
//! in seed order and are written as CSV trajectories plus a JSON summary.

pub mod config;
pub mod io;
mod runner;

pub use config::{AdversarySpec, Algorithm, ExperimentConfig, Mode, ProbeSpec, Seeds};
pub use io::{emit_csv, read_stream, read_trajectory, trajectory_bytes, write_stream};
pub use runner::{
    default_probes, run_experiment, run_probes, sweep, Aggregate, Metadata, RunOutput, SeedSummary,
    Summary, SweepOutput, SweepRow,
};
