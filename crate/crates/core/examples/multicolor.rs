//! Routing vectors to `n` colors through a tree of weighted balancers.
//!
//! cargo run --release --example multicolor

use discrepancy_lab::adversaries::sphere_vector_source;
use discrepancy_lab::balancers::default_c_param;
use discrepancy_lab::multicolor::ColorTree;
use discrepancy_lab::{pairwise_max_discrepancy, DiscrepancyState, RngSeed};

fn main() -> discrepancy_lab::Result<()> {
    let (n, d, horizon) = (5, 5, 1_000_000);
    let mut tree = ColorTree::build(n, d, default_c_param(d, horizon))?;
    println!("leaf path products: {:?}", tree.leaf_path_products());

    let mut state = DiscrepancyState::new(n, d)?;
    let mut rng = RngSeed::new(7, 1).rng();
    let mut counts = vec![0usize; n];
    let mut worst = 0.0f64;
    let mut checkpoint = 1_000;
    for (t, v) in sphere_vector_source(d, horizon, RngSeed::new(7, 0))?.enumerate() {
        let color = tree.assign_color(&v, &mut rng)?;
        state.ingest(color, &v)?;
        counts[color] += 1;
        worst = worst.max(pairwise_max_discrepancy(&state));
        if t + 1 == checkpoint {
            println!("T = {:>8}: max pairwise discrepancy so far {worst:.3}", t + 1);
            checkpoint *= 10;
        }
    }
    println!("items per color: {counts:?}");
    println!("clamp events: {}", tree.total_clamps());
    Ok(())
}
