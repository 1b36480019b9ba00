//! Online allocation of goods with i.i.d. values: welfare maximization,
//! the two-phase allocator and the discrepancy-tree allocator.
//!
//! cargo run --release --example envy_allocation

use discrepancy_lab::adversaries::{iid_value_source, DistributionSpec};
use discrepancy_lab::balancers::default_c_param;
use discrepancy_lab::envy::{
    envy_graph_edges, is_acyclic, welfare_max_step, DiscrepancyAllocator, TwoPhaseState,
};
use discrepancy_lab::{max_envy, AllocationState, RngSeed};

fn main() -> discrepancy_lab::Result<()> {
    let (n, horizon) = (3, 100_000);
    let dist = DistributionSpec::Uniform01;
    let items = || iid_value_source(n, horizon, dist, RngSeed::new(11, 0));

    let mut welfare = AllocationState::new(n)?;
    let mut rng = RngSeed::new(11, 1).rng();
    for item in items()? {
        welfare_max_step(&mut welfare, &item, &mut rng)?;
    }
    println!("welfare max:      final max envy {:.3}", max_envy(&welfare));

    let mut two_phase = TwoPhaseState::new(n, horizon, 1.0)?;
    let mut rng = RngSeed::new(11, 1).rng();
    for item in items()? {
        two_phase.step(&item, &mut rng)?;
    }
    let graph = envy_graph_edges(two_phase.alloc(), 1.0);
    println!(
        "two phase:        final max envy {:.3} (L = {}, T1 = {}, phase-2 counts {:?})",
        max_envy(two_phase.alloc()),
        two_phase.threshold(),
        two_phase.phase1_len(),
        two_phase.alloc().w()
    );
    println!(
        "                  envy graph edges {:?}, acyclic {}, monitors {:?}",
        graph.edges(),
        is_acyclic(&graph),
        two_phase.monitors()
    );

    let mut tree = DiscrepancyAllocator::new(n, default_c_param(n, horizon))?;
    let mut state = AllocationState::new(n)?;
    let mut rng = RngSeed::new(11, 1).rng();
    for item in items()? {
        tree.step(&mut state, &item, &mut rng)?;
    }
    println!("discrepancy tree: final max envy {:.3}", max_envy(&state));
    Ok(())
}
