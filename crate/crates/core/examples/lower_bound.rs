//! The adaptive two-agent adversary: envy growth against a random
//! allocator, the `A*(K)` closed form, and sampled oblivious instances.
//!
//! cargo run --release --example lower_bound

use discrepancy_lab::adversaries::{
    astar_policy, oblivious_sampled_instance, v_d, AdaptiveLrState, Side,
};
use discrepancy_lab::envy::random_step;
use discrepancy_lab::verify::scaling_fit;
use discrepancy_lab::{max_envy, AllocationState, RngSeed};

fn random_run(r: f64, horizon: usize, seed: u64) -> discrepancy_lab::Result<f64> {
    let mut adversary = AdaptiveLrState::new(r)?;
    let mut state = AllocationState::new(2)?;
    let mut rng = RngSeed::new(seed, 1).rng();
    let mut last = None;
    let mut worst = 0.0f64;
    for _ in 0..horizon {
        let item = adversary.step(last);
        last = Side::from_agent(random_step(&mut state, &item, &mut rng)?);
        worst = worst.max(max_envy(&state));
    }
    Ok(worst)
}

fn main() -> discrepancy_lab::Result<()> {
    let r = 0.9;
    let mut points = Vec::new();
    for e in 10..=16 {
        let horizon = 1usize << e;
        let mut maxima = (0..30)
            .map(|s| random_run(r, horizon, s))
            .collect::<discrepancy_lab::Result<Vec<f64>>>()?;
        maxima.sort_by(f64::total_cmp);
        let median = (maxima[14] + maxima[15]) / 2.0;
        println!("T = 2^{e}: median max envy {median:.2}");
        points.push((horizon as f64, median));
    }
    let fit = scaling_fit(&points)?;
    println!("log-log slope {:.3} (T^(r/2) predicts {:.3})", fit.slope, r / 2.0);

    let (t_prime, k) = (1000, 31);
    let mut adversary = AdaptiveLrState::new(r)?;
    let mut state = AllocationState::new(2)?;
    let mut last = None;
    for step in 0..t_prime - k {
        let item = adversary.step(last);
        let side = astar_policy(t_prime, k, step)?;
        state.update(&item, side.agent())?;
        last = Some(side);
    }
    let closed = (k as f64).powf(r) + (t_prime as f64 / 2.0 - k as f64) * (v_d(r, k - 1) - v_d(r, k));
    println!(
        "A*({k}) at step {}: simulated envy {:.12}, closed form {closed:.12}",
        t_prime - k,
        max_envy(&state)
    );

    let instance = oblivious_sampled_instance(20, 0.01, r, RngSeed::new(3, 0))?;
    let nonzero = instance.iter().filter(|i| i.values().iter().any(|v| *v > 0.0)).count();
    println!("oblivious instance: {nonzero} adversarial items, then zero padding to {}", instance.len());
    Ok(())
}
