use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AdversarySpec, Algorithm, ExperimentConfig, Mode, ProbeSpec};
use super::io::{emit_csv, read_stream, write_json, write_stream};
use crate::adversaries::{
    iid_value_source, iid_vector_source, oblivious_sampled_instance, orthogonal_adversary,
    sphere_vector_source, AdaptiveLrState, IidValueSource, IidVectorSource, Side, SphereSource,
};
use crate::balancers::{BalancerState, SigningRule};
use crate::envy::{random_step, welfare_max_step, DiscrepancyAllocator, TwoPhaseState};
use crate::adversaries::astar_policy;
use crate::error::{Error, Result};
use crate::multicolor::ColorTree;
use crate::rng::RngSeed;
use crate::types::{
    max_envy, norm_inf, pairwise_max_discrepancy, AllocationState, DiscrepancyState,
    ExperimentRecord, StreamEvent, ValueItem, VectorItem,
};
use crate::verify::{
    concentration_probe, halls_probe, order_stat_probe, orthogonality_probe, scaling_fit,
    tree_oracle_probe, ProbeReport, ScalingFit,
};

/// Per-seed results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub steps: usize,
    pub final_metric: f64,
    pub max_metric: f64,
    pub clamp_count: usize,
    /// Violation counters and other end-of-run monitor values.
    pub monitors: BTreeMap<String, f64>,
    pub failed: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub seeds: usize,
    pub failed: usize,
    pub median_max_metric: f64,
    pub median_final_metric: f64,
    pub mean_final_metric: f64,
    pub success_threshold: f64,
    /// Fraction of all seeds whose final metric is at most the threshold.
    pub fraction_final_within_threshold: f64,
    pub total_clamps: usize,
    /// Monitor counters summed over seeds.
    pub monitor_totals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub threshold_log_base: String,
    pub delta_log_base: String,
    pub c_param_rule: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// The configuration with every default filled in.
    pub config: ExperimentConfig,
    pub metadata: Metadata,
    pub per_seed: Vec<SeedSummary>,
    pub aggregate: Option<Aggregate>,
    pub probes: Vec<ProbeReport>,
    pub wall_time_seconds: f64,
}

impl Summary {
    pub fn probes_passed(&self) -> bool {
        self.probes.iter().all(|p| p.passed)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: Summary,
    /// Trajectory rows in seed order.
    pub records: Vec<(u64, ExperimentRecord)>,
    /// Generated items per seed, when `emit_stream` is set.
    pub streams: Vec<(u64, Vec<StreamEvent>)>,
}

impl RunOutput {
    /// Writes `trajectory.csv`, `summary.json` and, if present,
    /// `stream_seed<k>.csv` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        emit_csv(&self.records, dir.join("trajectory.csv"))?;
        write_json(dir.join("summary.json"), &self.summary)?;
        for (seed, events) in &self.streams {
            write_stream(dir.join(format!("stream_seed{seed}.csv")), events)?;
        }
        Ok(())
    }
}

struct SeedRun {
    summary: SeedSummary,
    records: Vec<ExperimentRecord>,
    stream: Vec<StreamEvent>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// Runs every seed of `config` in parallel; results are sorted by seed.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let started = Instant::now();
    let resolved = config.resolved();
    let mut warnings = Vec::new();
    if config.mode == Mode::Verify {
        let probes = run_probes(config)?;
        return Ok(RunOutput {
            summary: Summary {
                config: resolved,
                metadata: metadata(warnings),
                per_seed: Vec::new(),
                aggregate: None,
                probes,
                wall_time_seconds: started.elapsed().as_secs_f64(),
            },
            records: Vec::new(),
            streams: Vec::new(),
        });
    }
    let replay = load_replay(config)?;
    if config.algorithm == Some(Algorithm::TwoPhase) {
        let probe = TwoPhaseState::new(config.n, config.horizon, config.c)?;
        if probe.phase1_skipped() {
            warnings.push(format!(
                "horizon {} too short for a phase 1 with n = {}; the run is entirely phase 2",
                config.horizon, config.n
            ));
        }
    }
    let seeds = config.seeds.values();
    let runs: Vec<SeedRun> = seeds
        .par_iter()
        .map(|&seed| run_seed(&resolved, seed, replay.clone()))
        .collect();

    let mut per_seed = Vec::with_capacity(runs.len());
    let mut records = Vec::new();
    let mut streams = Vec::new();
    for run in runs {
        let seed = run.summary.seed;
        records.extend(run.records.into_iter().map(|r| (seed, r)));
        if config.emit_stream {
            streams.push((seed, run.stream));
        }
        per_seed.push(run.summary);
    }
    let total_clamps: usize = per_seed.iter().map(|s| s.clamp_count).sum();
    if total_clamps > 0 {
        warnings.push(format!("{total_clamps} balancer probabilities were clamped to [0, 1]"));
    }
    let ok: Vec<&SeedSummary> = per_seed.iter().filter(|s| s.failed.is_none()).collect();
    let mut monitor_totals = BTreeMap::new();
    for s in &ok {
        for (k, v) in &s.monitors {
            *monitor_totals.entry(k.clone()).or_insert(0.0) += v;
        }
    }
    let aggregate = Aggregate {
        seeds: per_seed.len(),
        failed: per_seed.len() - ok.len(),
        median_max_metric: median(ok.iter().map(|s| s.max_metric).collect()),
        median_final_metric: median(ok.iter().map(|s| s.final_metric).collect()),
        mean_final_metric: ok.iter().map(|s| s.final_metric).sum::<f64>() / ok.len().max(1) as f64,
        success_threshold: config.success_threshold,
        fraction_final_within_threshold: ok
            .iter()
            .filter(|s| s.final_metric <= config.success_threshold)
            .count() as f64
            / per_seed.len() as f64,
        total_clamps,
        monitor_totals,
    };
    Ok(RunOutput {
        summary: Summary {
            config: resolved,
            metadata: metadata(warnings),
            per_seed,
            aggregate: Some(aggregate),
            probes: Vec::new(),
            wall_time_seconds: started.elapsed().as_secs_f64(),
        },
        records,
        streams,
    })
}

fn metadata(warnings: Vec<String>) -> Metadata {
    Metadata {
        version: env!("CARGO_PKG_VERSION").to_string(),
        threshold_log_base: "e: L = ceil(ln T * sqrt T)".to_string(),
        delta_log_base: "2: prefix = ceil(log2(1/delta))".to_string(),
        c_param_rule: "30 ln(2 d T) unless set".to_string(),
        warnings,
    }
}

fn load_replay(config: &ExperimentConfig) -> Result<Option<Arc<Vec<StreamEvent>>>> {
    let Some(AdversarySpec::Replay { path }) = &config.adversary else {
        return Ok(None);
    };
    let events = read_stream(path)?;
    let vectors = matches!(config.mode, Mode::Balance | Mode::Multicolor);
    for (t, event) in events.iter().enumerate() {
        let ok = match event {
            StreamEvent::Vector(v) => vectors && v.dim() == config.d,
            StreamEvent::Value(v) => !vectors && v.n() == config.n,
        };
        if !ok {
            return Err(Error::Config(format!(
                "{}: item {} does not fit mode {:?} with n = {}, d = {}",
                path.display(),
                t + 1,
                config.mode,
                config.n,
                config.d
            )));
        }
    }
    Ok(Some(Arc::new(events)))
}

fn run_seed(config: &ExperimentConfig, seed: u64, replay: Option<Arc<Vec<StreamEvent>>>) -> SeedRun {
    let mut run = SeedRun {
        summary: SeedSummary {
            seed,
            steps: 0,
            final_metric: f64::NAN,
            max_metric: f64::NAN,
            clamp_count: 0,
            monitors: BTreeMap::new(),
            failed: None,
        },
        records: Vec::new(),
        stream: Vec::new(),
    };
    let result = match config.mode {
        Mode::Balance => run_balance(config, seed, replay, &mut run),
        Mode::Multicolor => run_multicolor(config, seed, replay, &mut run),
        Mode::Envy | Mode::Lowerbound => run_envy(config, seed, replay, &mut run),
        Mode::Verify => unreachable!("verify mode has no per-seed runs"),
    };
    if let Err(e) = result {
        run.summary.failed = Some(e.to_string());
    }
    run
}

/// Shared bookkeeping for one step: finiteness, running max and recording.
struct Tracker<'a> {
    run: &'a mut SeedRun,
    record_every: usize,
    horizon: usize,
    emit_stream: bool,
}

impl Tracker<'_> {
    fn observe(&mut self, t: usize, metric: f64, monitors: &[(&str, f64)]) -> Result<()> {
        if !metric.is_finite() || monitors.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        let s = &mut self.run.summary;
        s.steps = t;
        s.final_metric = metric;
        s.max_metric = if t == 1 { metric } else { s.max_metric.max(metric) };
        if t % self.record_every == 0 || t == self.horizon {
            let mut rec = ExperimentRecord::new(t, metric).with("running_max", s.max_metric);
            for (name, v) in monitors {
                rec = rec.with(name, *v);
            }
            self.run.records.push(rec);
        }
        Ok(())
    }

    fn push(&mut self, event: impl FnOnce() -> StreamEvent) {
        if self.emit_stream {
            self.run.stream.push(event());
        }
    }

    /// Records the last step when the input ended before the horizon.
    fn finish(&mut self, last: (f64, Vec<(String, f64)>)) {
        let s = &self.run.summary;
        let t = s.steps;
        if t > 0 && t % self.record_every != 0 && t != self.horizon {
            let mut rec = ExperimentRecord::new(t, last.0).with("running_max", s.max_metric);
            for (name, v) in last.1 {
                rec = rec.with(&name, v);
            }
            self.run.records.push(rec);
        }
    }
}

fn tracker<'a>(config: &ExperimentConfig, run: &'a mut SeedRun) -> Tracker<'a> {
    Tracker {
        run,
        record_every: config.record_every,
        horizon: config.horizon,
        emit_stream: config.emit_stream,
    }
}

enum VectorFeed {
    Iid(IidVectorSource),
    Sphere(SphereSource),
    Orthogonal(usize),
    Replay(Arc<Vec<StreamEvent>>, usize),
}

impl VectorFeed {
    fn new(config: &ExperimentConfig, seed: u64, replay: Option<Arc<Vec<StreamEvent>>>) -> Result<Self> {
        let source_seed = RngSeed::new(seed, 0);
        Ok(match config.adversary()? {
            AdversarySpec::IidVector { scale } => {
                VectorFeed::Iid(iid_vector_source(config.d, config.horizon, *scale, source_seed)?)
            }
            AdversarySpec::Sphere => VectorFeed::Sphere(sphere_vector_source(config.d, config.horizon, source_seed)?),
            AdversarySpec::Orthogonal => VectorFeed::Orthogonal(config.horizon),
            AdversarySpec::Replay { .. } => VectorFeed::Replay(replay.expect("replay loaded"), 0),
            other => return Err(Error::Config(format!("{other:?} does not produce vectors"))),
        })
    }

    /// `d_vec` is only consulted by the orthogonal adversary.
    fn next(&mut self, d_vec: &[f64]) -> Option<Result<VectorItem>> {
        match self {
            VectorFeed::Iid(s) => s.next().map(Ok),
            VectorFeed::Sphere(s) => s.next().map(Ok),
            VectorFeed::Orthogonal(remaining) => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                Some(orthogonal_adversary(d_vec))
            }
            VectorFeed::Replay(events, at) => {
                let event = events.get(*at)?;
                *at += 1;
                match event {
                    StreamEvent::Vector(v) => Some(Ok(v.clone())),
                    StreamEvent::Value(_) => Some(Err(Error::param("value item in a vector stream"))),
                }
            }
        }
    }
}

fn run_balance(
    config: &ExperimentConfig,
    seed: u64,
    replay: Option<Arc<Vec<StreamEvent>>>,
    run: &mut SeedRun,
) -> Result<()> {
    let rule = match config.algorithm()? {
        Algorithm::Greedy => SigningRule::Greedy,
        Algorithm::RandomSign => SigningRule::Random,
        Algorithm::SelfBalancing => SigningRule::SelfBalancing,
        other => return Err(Error::Config(format!("{other:?} is not a signing rule"))),
    };
    let mut feed = VectorFeed::new(config, seed, replay)?;
    let mut state = BalancerState::new(config.d, config.resolved_c_param())?;
    let mut rng = RngSeed::new(seed, 1).rng();
    let mut tr = tracker(config, run);
    let mut last = (0.0, Vec::new());
    for t in 1..=config.horizon {
        let Some(v) = feed.next(state.d_vec()) else { break };
        let v = v?;
        rule.sign(&mut state, &v, &mut rng)?;
        tr.push(|| StreamEvent::Vector(v));
        let metric = norm_inf(state.d_vec());
        let norm2_sq: f64 = state.d_vec().iter().map(|x| x * x).sum();
        tr.observe(t, metric, &[("norm2_sq", norm2_sq)])?;
        last = (metric, vec![("norm2_sq".to_string(), norm2_sq)]);
    }
    tr.finish(last);
    run.summary.clamp_count = state.clamp_count();
    let norm2_sq: f64 = state.d_vec().iter().map(|x| x * x).sum();
    run.summary.monitors.insert("final_norm2_sq".into(), norm2_sq);
    Ok(())
}

fn run_multicolor(
    config: &ExperimentConfig,
    seed: u64,
    replay: Option<Arc<Vec<StreamEvent>>>,
    run: &mut SeedRun,
) -> Result<()> {
    let mut feed = VectorFeed::new(config, seed, replay)?;
    let mut tree = ColorTree::build(config.n, config.d, config.resolved_c_param())?;
    let mut state = DiscrepancyState::new(config.n, config.d)?;
    let mut total = vec![0.0; config.d];
    let mut rng = RngSeed::new(seed, 1).rng();
    let mut worst_conservation = 0.0f64;
    let mut tr = tracker(config, run);
    let mut last = (0.0, Vec::new());
    for t in 1..=config.horizon {
        let Some(v) = feed.next(&[]) else { break };
        let v = v?;
        let color = tree.assign_color(&v, &mut rng)?;
        state.ingest(color, &v)?;
        for (acc, x) in total.iter_mut().zip(v.coords()) {
            *acc += x;
        }
        let conservation = state
            .total()
            .iter()
            .zip(&total)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst_conservation = worst_conservation.max(conservation);
        tr.push(|| StreamEvent::Vector(v));
        let metric = pairwise_max_discrepancy(&state);
        tr.observe(t, metric, &[("conservation_error", conservation)])?;
        last = (metric, vec![("conservation_error".to_string(), conservation)]);
    }
    tr.finish(last);
    run.summary.clamp_count = tree.total_clamps();
    run.summary
        .monitors
        .insert("max_conservation_error".into(), worst_conservation);
    Ok(())
}

enum ValueFeed {
    Iid(IidValueSource),
    Adaptive(AdaptiveLrState, usize),
    Fixed(Vec<ValueItem>, usize),
    Replay(Arc<Vec<StreamEvent>>, usize),
}

impl ValueFeed {
    fn new(config: &ExperimentConfig, seed: u64, replay: Option<Arc<Vec<StreamEvent>>>) -> Result<Self> {
        let source_seed = RngSeed::new(seed, 0);
        Ok(match config.adversary()? {
            AdversarySpec::IidValue { dist } => {
                ValueFeed::Iid(iid_value_source(config.n, config.horizon, *dist, source_seed)?)
            }
            AdversarySpec::AdaptiveLr => ValueFeed::Adaptive(AdaptiveLrState::new(config.r)?, config.horizon),
            AdversarySpec::Oblivious => ValueFeed::Fixed(
                oblivious_sampled_instance(config.horizon, config.delta, config.r, source_seed)?,
                0,
            ),
            AdversarySpec::Replay { .. } => ValueFeed::Replay(replay.expect("replay loaded"), 0),
            other => return Err(Error::Config(format!("{other:?} does not produce values"))),
        })
    }

    fn next(&mut self, last_recipient: Option<usize>) -> Option<Result<ValueItem>> {
        match self {
            ValueFeed::Iid(s) => s.next().map(Ok),
            ValueFeed::Adaptive(adv, remaining) => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                Some(Ok(adv.step(last_recipient.and_then(Side::from_agent))))
            }
            ValueFeed::Fixed(items, at) => {
                let item = items.get(*at)?.clone();
                *at += 1;
                Some(Ok(item))
            }
            ValueFeed::Replay(events, at) => {
                let event = events.get(*at)?;
                *at += 1;
                match event {
                    StreamEvent::Value(v) => Some(Ok(v.clone())),
                    StreamEvent::Vector(_) => Some(Err(Error::param("vector item in a value stream"))),
                }
            }
        }
    }
}

enum Allocator {
    Welfare(AllocationState),
    Random(AllocationState),
    TwoPhase(TwoPhaseState),
    Tree(DiscrepancyAllocator, AllocationState),
    Astar(AllocationState, usize, usize),
}

impl Allocator {
    fn new(config: &ExperimentConfig) -> Result<Self> {
        let n = config.n;
        Ok(match config.algorithm()? {
            Algorithm::WelfareMax => Allocator::Welfare(AllocationState::new(n)?),
            Algorithm::UniformRandom => Allocator::Random(AllocationState::new(n)?),
            Algorithm::TwoPhase => Allocator::TwoPhase(TwoPhaseState::new(n, config.horizon, config.c)?),
            Algorithm::DiscrepancyTree => Allocator::Tree(
                DiscrepancyAllocator::new(n, config.resolved_c_param())?,
                AllocationState::new(n)?,
            ),
            Algorithm::Astar => Allocator::Astar(AllocationState::new(n)?, config.horizon, config.resolved_k()),
            other => return Err(Error::Config(format!("{other:?} is not an allocator"))),
        })
    }

    fn step(&mut self, item: &ValueItem, rng: &mut ChaCha8Rng) -> Result<usize> {
        match self {
            Allocator::Welfare(s) => welfare_max_step(s, item, rng),
            Allocator::Random(s) => random_step(s, item, rng),
            Allocator::TwoPhase(s) => s.step(item, rng),
            Allocator::Tree(a, s) => a.step(s, item, rng),
            Allocator::Astar(s, t_prime, k) => {
                let recipient = astar_policy(*t_prime, *k, s.t())?.agent();
                s.update(item, recipient)?;
                Ok(recipient)
            }
        }
    }

    fn alloc(&self) -> &AllocationState {
        match self {
            Allocator::Welfare(s) | Allocator::Random(s) | Allocator::Astar(s, ..) => s,
            Allocator::TwoPhase(s) => s.alloc(),
            Allocator::Tree(_, s) => s,
        }
    }
}

fn run_envy(
    config: &ExperimentConfig,
    seed: u64,
    replay: Option<Arc<Vec<StreamEvent>>>,
    run: &mut SeedRun,
) -> Result<()> {
    let mut feed = ValueFeed::new(config, seed, replay)?;
    let mut alloc = Allocator::new(config)?;
    let mut rng = RngSeed::new(seed, 1).rng();
    let mut last_recipient = None;
    let mut tr = tracker(config, run);
    let mut last = (0.0, Vec::new());
    for t in 1..=config.horizon {
        let Some(item) = feed.next(last_recipient) else { break };
        let item = item?;
        last_recipient = Some(alloc.step(&item, &mut rng)?);
        tr.push(|| StreamEvent::Value(item));
        let metric = max_envy(alloc.alloc());
        if let Allocator::TwoPhase(s) = &alloc {
            let m = s.monitors();
            let monitors = [
                ("acyclicity_violations", m.acyclicity_violations as f64),
                ("balance_violations", m.balance_violations as f64),
            ];
            tr.observe(t, metric, &monitors)?;
            last = (metric, monitors.iter().map(|(k, v)| (k.to_string(), *v)).collect());
        } else {
            tr.observe(t, metric, &[])?;
            last = (metric, Vec::new());
        }
    }
    tr.finish(last);
    match &alloc {
        Allocator::TwoPhase(s) => {
            let m = s.monitors();
            let monitors = &mut run.summary.monitors;
            monitors.insert("acyclicity_violations".into(), m.acyclicity_violations as f64);
            monitors.insert("balance_violations".into(), m.balance_violations as f64);
            monitors.insert("graph_checks".into(), m.graph_checks as f64);
            monitors.insert("balance_checks".into(), m.balance_checks as f64);
        }
        Allocator::Tree(a, _) => run.summary.clamp_count = a.tree().total_clamps(),
        _ => {}
    }
    Ok(())
}

/// Runs the configured probes, or a default set when none are listed.
/// Each probe uses its own stream of the first seed.
pub fn run_probes(config: &ExperimentConfig) -> Result<Vec<ProbeReport>> {
    let base = config.seeds.values()[0];
    let probes = if config.probes.is_empty() {
        default_probes()
    } else {
        config.probes.clone()
    };
    let mut out = Vec::new();
    for (i, probe) in probes.iter().enumerate() {
        let seed = RngSeed::new(base, i as u64);
        match *probe {
            ProbeSpec::Concentration { k, l, c, dist, trials } => {
                out.push(concentration_probe(k, l, c, dist, trials, seed)?)
            }
            ProbeSpec::Halls { instances } => out.push(halls_probe(instances, seed)),
            ProbeSpec::OrderStats { n, items, tolerance } => out.extend(order_stat_probe(n, items, tolerance, seed)?),
            ProbeSpec::Orthogonality { d, delta, trials, floor } => {
                out.push(orthogonality_probe(d, delta, trials, floor, seed)?)
            }
            ProbeSpec::TreeOracle { trees, bound } => out.push(tree_oracle_probe(trees, bound, seed)?),
        }
    }
    Ok(out)
}

/// Probe set used by `verify` when the config lists none.
pub fn default_probes() -> Vec<ProbeSpec> {
    use crate::adversaries::DistributionSpec;
    let mut probes = vec![
        ProbeSpec::Concentration {
            k: 1000,
            l: 10,
            c: 2,
            dist: DistributionSpec::Uniform01,
            trials: 100_000,
        },
        ProbeSpec::Halls { instances: 100_000 },
    ];
    probes.extend([2, 3, 5].map(|n| ProbeSpec::OrderStats {
        n,
        items: 1_000_000,
        tolerance: 0.005,
    }));
    probes.push(ProbeSpec::Orthogonality {
        d: 3,
        delta: 0.1,
        trials: 1_000_000,
        floor: crate::verify::ORTHOGONALITY_FLOOR,
    });
    probes.push(ProbeSpec::TreeOracle { trees: 100, bound: 3.0 });
    probes
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub horizon: usize,
    pub seeds: usize,
    pub failed: usize,
    pub median_max_metric: f64,
    pub median_final_metric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub fit: Option<ScalingFit>,
    /// Why no fit was produced.
    pub fit_error: Option<String>,
    /// Median max metric at the last horizon over the first.
    pub ratio_last_to_first: f64,
}

impl SweepOutput {
    /// Writes `sweep.csv` (one row per horizon) and `sweep.json`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("sweep.csv");
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = csv::Writer::from_writer(file);
        let to_io = |e: csv::Error| Error::io(&path, std::io::Error::other(e));
        w.write_record(["T", "seeds", "failed", "median_max_metric", "median_final_metric"])
            .map_err(to_io)?;
        for r in &self.rows {
            w.write_record([
                r.horizon.to_string(),
                r.seeds.to_string(),
                r.failed.to_string(),
                r.median_max_metric.to_string(),
                r.median_final_metric.to_string(),
            ])
            .map_err(to_io)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        write_json(dir.join("sweep.json"), self)
    }
}

/// Runs `config` once per horizon in `t_grid` (ascending) and fits
/// `log median max metric` against `log T`. Only the final record of each
/// run is kept; `c_param`, if unset, is re-derived for every horizon.
pub fn sweep(config: &ExperimentConfig, t_grid: &[usize]) -> Result<SweepOutput> {
    if t_grid.is_empty() {
        return Err(Error::Config("empty T grid".into()));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("T grid must be strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(t_grid.len());
    for &horizon in t_grid {
        let mut cfg = config.clone();
        cfg.horizon = horizon;
        cfg.record_every = horizon.max(1);
        cfg.emit_stream = false;
        let out = run_experiment(&cfg)?;
        let agg = out.summary.aggregate.expect("non-verify runs aggregate");
        rows.push(SweepRow {
            horizon,
            seeds: agg.seeds,
            failed: agg.failed,
            median_max_metric: agg.median_max_metric,
            median_final_metric: agg.median_final_metric,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.horizon as f64, r.median_max_metric))
        .collect();
    let (fit, fit_error) = match scaling_fit(&points) {
        Ok(fit) => (Some(fit), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let ratio_last_to_first = rows.last().unwrap().median_max_metric / rows[0].median_max_metric;
    Ok(SweepOutput {
        rows,
        fit,
        fit_error,
        ratio_last_to_first,
    })
}
