//! Configuration-driven runs: a JSON config, seeded parallel runs, CSV and
//! JSON outputs, and a horizon sweep with a log-log fit.
//!
//! cargo run --release --example experiment [output-dir]

use discrepancy_lab::experiment::{run_experiment, sweep, ExperimentConfig};

fn main() -> discrepancy_lab::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().join("disclab-example").display().to_string());

    let cfg = ExperimentConfig::from_json(
        r#"{
            "mode": "envy",
            "algorithm": "two_phase",
            "adversary": {"kind": "iid_value", "dist": {"kind": "point_mass", "x": 1.0}},
            "n": 2,
            "T": 10000,
            "seeds": {"base_seed": 0, "count": 100},
            "record_every": 500
        }"#,
    )?;
    let run = run_experiment(&cfg)?;
    run.write(&out)?;
    let agg = run.summary.aggregate.as_ref().expect("aggregate");
    println!(
        "two phase, point mass: {:.0}% of seeds end with max envy <= {}, monitor totals {:?}",
        100.0 * agg.fraction_final_within_threshold,
        agg.success_threshold,
        agg.monitor_totals
    );
    println!("wrote {out}/trajectory.csv and {out}/summary.json");

    let cfg = ExperimentConfig::from_json(
        r#"{"mode": "multicolor", "algorithm": "color_tree", "adversary": {"kind": "sphere"},
            "n": 5, "d": 5, "T": 1, "seeds": {"base_seed": 0, "count": 10}}"#,
    )?;
    let table = sweep(&cfg, &[1_000, 10_000, 100_000])?;
    for row in &table.rows {
        println!("T = {:>6}: median max discrepancy {:.3}", row.horizon, row.median_max_metric);
    }
    if let Some(fit) = table.fit {
        println!("slope {:.3}, ratio last/first {:.3}", fit.slope, table.ratio_last_to_first);
    }
    Ok(())
}
