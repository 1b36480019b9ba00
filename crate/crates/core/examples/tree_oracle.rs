//! Exhaustive prefix-sum selection on tiny trees.
//!
//! cargo run --release --example tree_oracle

use discrepancy_lab::verify::{random_tiny_tree, tree_selection_oracle};
use discrepancy_lab::RngSeed;

fn main() -> discrepancy_lab::Result<()> {
    let mut rng = RngSeed::new(10, 0).rng();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let tree = random_tiny_tree(&mut rng);
        let (selection, optimum) = tree_selection_oracle(&tree)?;
        worst = worst.max(optimum);
        if i < 3 {
            println!(
                "tree {i}: {} edges, depth {}, {} selections, optimum {optimum:.4} via {selection:?}",
                tree.edges(),
                tree.depth(),
                tree.selection_count()
            );
        }
    }
    println!("largest optimum over 100 trees: {worst:.4}");
    Ok(())
}
