//! Two-way signing rules against an adaptive and a stochastic adversary.
//!
//! The orthogonal adversary always answers with a unit vector orthogonal to
//! the current signed sum, so every rule ends with `‖d_T‖₂² = T`. Against
//! i.i.d. inputs the self-balancing walk stays far below the random walk.
//!
//! cargo run --release --example balancing

use discrepancy_lab::adversaries::{orthogonal_adversary, sphere_vector_source};
use discrepancy_lab::balancers::{default_c_param, BalancerState, SigningRule};
use discrepancy_lab::RngSeed;

fn main() -> discrepancy_lab::Result<()> {
    let (d, horizon) = (4, 10_000);
    let rules = [SigningRule::Greedy, SigningRule::Random, SigningRule::SelfBalancing];

    println!("orthogonal adversary, d = {d}, T = {horizon}");
    for rule in rules {
        let mut state = BalancerState::new(d, default_c_param(d, horizon))?;
        let mut rng = RngSeed::new(1, 1).rng();
        for _ in 0..horizon {
            let v = orthogonal_adversary(state.d_vec())?;
            rule.sign(&mut state, &v, &mut rng)?;
        }
        let norm_sq: f64 = state.d_vec().iter().map(|x| x * x).sum();
        println!("  {rule:?}: |d_T|^2 = {norm_sq:.6}");
    }

    let (d, horizon) = (10, 100_000);
    println!("i.i.d. sphere vectors, d = {d}, T = {horizon}");
    for rule in rules {
        let mut state = BalancerState::new(d, default_c_param(d, horizon))?;
        let mut rng = RngSeed::new(2, 1).rng();
        let mut worst = 0.0f64;
        for v in sphere_vector_source(d, horizon, RngSeed::new(2, 0))? {
            rule.sign(&mut state, &v, &mut rng)?;
            worst = worst.max(state.d_vec().iter().fold(0.0, |m: f64, x| m.max(x.abs())));
        }
        println!(
            "  {rule:?}: max_t |d_t|_inf = {worst:.2}, clamped {} times",
            state.clamp_count()
        );
    }
    Ok(())
}
