use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use discrepancy_lab::experiment::{
    run_experiment, sweep, AdversarySpec, ExperimentConfig, Mode, RunOutput, Seeds,
};
use discrepancy_lab::Error;

/// Seeded experiments for online discrepancy and envy minimization.
#[derive(Parser)]
#[command(name = "disclab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Run(Common),
    /// Run the experiment once per horizon in the config's `t_grid` and fit a
    /// log-log slope.
    Sweep(Common),
    /// Run the probe set; exits with 2 if any probe fails.
    Verify(Common),
    /// Re-run an experiment on a recorded stream file.
    Replay {
        #[command(flatten)]
        common: Common,
        /// Stream file; defaults to the config's replay adversary.
        #[arg(long)]
        stream: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of seeds, starting at `--base-seed`.
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long)]
    base_seed: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

enum Failure {
    Config(String),
    Probe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl Common {
    fn load(&self, default_mode: Option<Mode>) -> Result<ExperimentConfig, Failure> {
        let mut cfg = match (&self.config, default_mode) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(mode)) => ExperimentConfig::from_json(&format!(r#"{{"mode":{}}}"#, serde_json::to_string(&mode).unwrap()))?,
            (None, None) => return Err(Failure::Config("--config is required".into())),
        };
        if self.seeds.is_some() || self.base_seed.is_some() {
            let (base, count) = match &cfg.seeds {
                Seeds::Range { base_seed, count } => (*base_seed, *count),
                Seeds::List(v) => (v.first().copied().unwrap_or(0), v.len() as u64),
            };
            cfg.seeds = Seeds::Range {
                base_seed: self.base_seed.unwrap_or(base),
                count: self.seeds.unwrap_or(count),
            };
        }
        if self.out.is_some() {
            cfg.out.clone_from(&self.out);
        }
        Ok(cfg)
    }
}

fn report(out: &RunOutput, quiet: bool) {
    if quiet {
        return;
    }
    let s = &out.summary;
    if let Some(agg) = &s.aggregate {
        println!(
            "seeds {} failed {} median max {} median final {} within {}: {:.3}",
            agg.seeds,
            agg.failed,
            agg.median_max_metric,
            agg.median_final_metric,
            agg.success_threshold,
            agg.fraction_final_within_threshold
        );
    }
    for p in &s.probes {
        println!(
            "{} {}: empirical {} vs {}{}",
            if p.passed { "PASS" } else { "FAIL" },
            p.name,
            p.empirical,
            p.bound_or_target,
            if p.warning { " (within noise band)" } else { "" }
        );
    }
    for w in &s.metadata.warnings {
        eprintln!("warning: {w}");
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run(common) => {
            let cfg = common.load(None)?;
            let out = run_experiment(&cfg)?;
            if let Some(dir) = &cfg.out {
                out.write(dir)?;
            }
            report(&out, common.quiet);
            if !out.summary.probes_passed() {
                return Err(Failure::Probe);
            }
        }
        Command::Sweep(common) => {
            let cfg = common.load(None)?;
            if cfg.t_grid.is_empty() {
                return Err(Failure::Config("sweep needs a non-empty t_grid".into()));
            }
            let out = sweep(&cfg, &cfg.t_grid)?;
            if let Some(dir) = &cfg.out {
                out.write(dir)?;
            }
            if !common.quiet {
                println!("T,median_max_metric");
                for r in &out.rows {
                    println!("{},{}", r.horizon, r.median_max_metric);
                }
                match (&out.fit, &out.fit_error) {
                    (Some(fit), _) => println!("slope {} intercept {} residual {}", fit.slope, fit.intercept, fit.residual),
                    (None, Some(e)) => println!("no fit: {e}"),
                    _ => {}
                }
                println!("ratio last/first {}", out.ratio_last_to_first);
            }
        }
        Command::Verify(common) => {
            let cfg = common.load(Some(Mode::Verify))?;
            if cfg.mode != Mode::Verify {
                return Err(Failure::Config("verify needs a config with mode \"verify\"".into()));
            }
            let out = run_experiment(&cfg)?;
            if let Some(dir) = &cfg.out {
                out.write(dir)?;
            }
            report(&out, common.quiet);
            if !out.summary.probes_passed() {
                return Err(Failure::Probe);
            }
        }
        Command::Replay { common, stream } => {
            let mut cfg = common.load(None)?;
            if let Some(path) = stream {
                cfg.adversary = Some(AdversarySpec::Replay { path });
            }
            if !matches!(cfg.adversary, Some(AdversarySpec::Replay { .. })) {
                return Err(Failure::Config("replay needs --stream or a replay adversary".into()));
            }
            cfg.emit_stream = false;
            let out = run_experiment(&cfg)?;
            if let Some(dir) = &cfg.out {
                out.write(dir)?;
            }
            report(&out, common.quiet);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Probe) => {
            eprintln!("one or more probes failed");
            ExitCode::from(2)
        }
    }
}
