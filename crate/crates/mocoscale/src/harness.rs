//! Experiment grid: seed derivation, execution over a worker pool, and
//! JSON-lines run records.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use log::{info, warn};
use mocoscale_core::algorithms::{run, AlgorithmConfig, AlgorithmKind};
use mocoscale_core::indicators::{archive_hypervolume, sample_reference_point, ReferencePoint};
use mocoscale_core::problems::GENERATOR_VERSION;
use mocoscale_core::seed::{hash_words, label_word};
use mocoscale_core::trajectory::TrajectoryRecorder;
use mocoscale_core::{generate_instance, Family, ObjectiveVector, ProblemInstance};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::persist::{atomic_write, read_json, save_instance, write_archive, write_json, ReferenceFile};

/// Serialises lists of `FromStr + Display` values as their names.
mod names {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::fmt::Display;
    use std::str::FromStr;

    pub fn serialize<T: Display, S: Serializer>(items: &[T], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(items.iter().map(|t| t.to_string()))
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(|_| D::Error::custom(format!("unknown name {s:?}"))))
            .collect()
    }
}

fn default_families() -> Vec<Family> {
    Family::ALL.to_vec()
}
fn default_dimensions() -> Vec<usize> {
    vec![100, 500, 1000, 5000]
}
fn default_objectives() -> usize {
    2
}
fn default_budgets() -> Vec<u64> {
    vec![100_000, 10_000_000]
}
fn default_algorithms() -> Vec<AlgorithmKind> {
    AlgorithmKind::ALL.to_vec()
}
fn default_runs() -> usize {
    30
}
fn default_reference_samples() -> usize {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(with = "names", default = "default_families")]
    pub families: Vec<Family>,
    #[serde(default = "default_dimensions")]
    pub dimensions: Vec<usize>,
    #[serde(default = "default_objectives")]
    pub objectives: usize,
    #[serde(default = "default_budgets")]
    pub budgets: Vec<u64>,
    #[serde(with = "names", default = "default_algorithms")]
    pub algorithms: Vec<AlgorithmKind>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_reference_samples")]
    pub reference_samples: usize,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            families: default_families(),
            dimensions: default_dimensions(),
            objectives: default_objectives(),
            budgets: default_budgets(),
            algorithms: default_algorithms(),
            runs: default_runs(),
            base_seed: 0,
            reference_samples: default_reference_samples(),
            output_dir: output_dir.into(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(!self.families.is_empty(), "families must not be empty");
        ensure!(!self.dimensions.is_empty(), "dimensions must not be empty");
        ensure!(!self.budgets.is_empty(), "budgets must not be empty");
        ensure!(!self.algorithms.is_empty(), "algorithms must not be empty");
        ensure!(self.runs >= 1, "runs must be at least 1");
        ensure!(self.reference_samples >= 1, "reference_samples must be at least 1");
        for &kind in &self.algorithms {
            for &budget in &self.budgets {
                AlgorithmConfig::new(kind, budget, 0).validate().with_context(|| format!("{kind} with budget {budget}"))?;
            }
        }
        Ok(())
    }

    /// Identifies everything a stored record depends on besides its own grid
    /// coordinates, so a resumed grid can refuse records from another setup.
    pub fn fingerprint(&self) -> String {
        let key = format!(
            "base_seed={};m={};reference_samples={};generator={}",
            self.base_seed, self.objectives, self.reference_samples, GENERATOR_VERSION
        );
        format!("{:016x}", label_word(&key))
    }
}

pub fn instance_seed(base_seed: u64, family: Family, dim: usize) -> u64 {
    hash_words(&[base_seed, label_word("instance"), label_word(family.name()), dim as u64])
}

pub fn reference_seed(base_seed: u64, family: Family, dim: usize) -> u64 {
    hash_words(&[base_seed, label_word("reference"), label_word(family.name()), dim as u64])
}

pub fn run_seed(base_seed: u64, family: Family, dim: usize, algorithm: AlgorithmKind, budget: u64, run: usize) -> u64 {
    hash_words(&[
        base_seed,
        label_word("run"),
        label_word(family.name()),
        dim as u64,
        label_word(algorithm.name()),
        budget,
        run as u64,
    ])
}

/// Grid cells skipped unless explicitly allowed.
pub fn is_expensive(family: Family, dim: usize, budget: u64) -> bool {
    family == Family::Moqap && dim >= 5000 && budget >= 10_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub fingerprint: String,
    pub family: String,
    #[serde(rename = "D")]
    pub dim: usize,
    pub m: usize,
    pub algorithm: String,
    pub budget: u64,
    pub run: usize,
    pub instance_seed: u64,
    pub run_seed: u64,
    pub evaluations: u64,
    pub final_hv: f64,
    pub archive_size: usize,
    /// Relative to the records directory.
    pub archive_path: String,
    pub trajectory: Vec<(u64, f64)>,
    pub runtime_secs: f64,
}

impl RunRecord {
    pub fn algorithm_kind(&self) -> Result<AlgorithmKind> {
        self.algorithm.parse().map_err(|_| anyhow::anyhow!("unknown algorithm {:?}", self.algorithm))
    }

    fn key(&self) -> (usize, u64, usize) {
        let a = AlgorithmKind::ALL.iter().position(|k| k.name() == self.algorithm).unwrap_or(usize::MAX);
        (a, self.budget, self.run)
    }
}

pub fn slug(kind: AlgorithmKind) -> String {
    kind.name().to_lowercase().replace('/', "-")
}

pub fn records_file(dir: &Path, family: Family, dim: usize) -> PathBuf {
    dir.join(format!("{family}-D{dim}.jsonl"))
}

pub fn read_records_file(path: &Path) -> Result<Vec<RunRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}:{}", path.display(), i + 1)))
        .collect()
}

/// Every record in the `*.jsonl` files of `dir`, ordered by file name and
/// then by line.
pub fn load_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "jsonl"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        out.extend(read_records_file(&f)?);
    }
    Ok(out)
}

fn write_records_file(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut text = String::new();
    for r in records {
        text.push_str(&serde_json::to_string(r)?);
        text.push('\n');
    }
    atomic_write(path, text.as_bytes())
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses all available cores.
    pub workers: Option<usize>,
    pub resume: bool,
    pub allow_expensive: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExperimentReport {
    pub completed: usize,
    pub skipped_existing: usize,
    pub skipped_expensive: usize,
    pub failed: Vec<String>,
}

struct Setting {
    family: Family,
    dim: usize,
    instance: ProblemInstance,
    reference: ObjectiveVector,
    path: PathBuf,
    records: Mutex<Vec<RunRecord>>,
}

struct Task {
    setting: usize,
    kind: AlgorithmKind,
    budget: u64,
    run: usize,
}

fn prepare_setting(config: &ExperimentConfig, family: Family, dim: usize) -> Result<Setting> {
    let dir = &config.output_dir;
    let instance = generate_instance(family, dim, config.objectives, instance_seed(config.base_seed, family, dim))?;
    save_instance(&dir.join("instances").join(format!("{family}-D{dim}.json")), &instance, false)?;

    let ref_path = dir.join("instances").join(format!("{family}-D{dim}.ref.json"));
    let sampling_seed = reference_seed(config.base_seed, family, dim);
    let stored: Option<ReferenceFile> = if ref_path.exists() { Some(read_json(&ref_path)?) } else { None };
    let reference = match stored {
        Some(r)
            if r.instance_id == crate::persist::instance_id(&instance)
                && r.n_samples == config.reference_samples
                && r.sampling_seed == sampling_seed =>
        {
            r.canonical()
        }
        _ => {
            info!("sampling reference point for {family} D={dim}");
            let r: ReferencePoint = sample_reference_point(&instance, config.reference_samples, sampling_seed)?;
            if !r.degenerate.is_empty() {
                warn!("{family} D={dim}: sampled front is flat in objectives {:?}", r.degenerate);
            }
            write_json(&ref_path, &ReferenceFile::describe(&instance, &r))?;
            r.values
        }
    };
    let path = records_file(dir, family, dim);
    let records = read_records_file(&path)?;
    Ok(Setting { family, dim, instance, reference, path, records: Mutex::new(records) })
}

fn execute(config: &ExperimentConfig, setting: &Setting, task: &Task, fingerprint: &str) -> Result<RunRecord> {
    let seed = run_seed(config.base_seed, setting.family, setting.dim, task.kind, task.budget, task.run);
    let algorithm = AlgorithmConfig::new(task.kind, task.budget, seed);
    let start = Instant::now();
    let recorder = TrajectoryRecorder::new(setting.reference.clone(), task.budget);
    let outcome = run(&setting.instance, &algorithm, recorder)?;
    let runtime_secs = start.elapsed().as_secs_f64();
    let final_hv = archive_hypervolume(&outcome.archive, &setting.reference)?;
    let trajectory: Vec<(u64, f64)> = outcome.observer.points().iter().map(|p| (p.eval_count, p.hv)).collect();
    ensure!(trajectory.last() == Some(&(task.budget, final_hv)), "trajectory does not end at the final archive");

    let rel = format!(
        "archives/{}-D{}/{}-b{}-r{}.csv.gz",
        setting.family,
        setting.dim,
        slug(task.kind),
        task.budget,
        task.run
    );
    write_archive(&config.output_dir.join(&rel), &setting.instance, &outcome.archive)?;
    Ok(RunRecord {
        fingerprint: fingerprint.to_string(),
        family: setting.family.name().to_string(),
        dim: setting.dim,
        m: setting.instance.m(),
        algorithm: task.kind.name().to_string(),
        budget: task.budget,
        run: task.run,
        instance_seed: setting.instance.seed(),
        run_seed: seed,
        evaluations: outcome.evaluations,
        final_hv,
        archive_size: outcome.archive.len(),
        archive_path: rel,
        trajectory,
        runtime_secs,
    })
}

/// Number of workers from `MOCOSCALE_WORKERS`, if set and valid.
pub fn workers_from_env() -> Option<usize> {
    std::env::var("MOCOSCALE_WORKERS").ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0)
}

/// Runs every missing cell of the grid. Records already on disk are kept
/// and their cells skipped, which requires `resume`.
pub fn run_experiment(config: &ExperimentConfig, options: &RunOptions) -> Result<ExperimentReport> {
    config.validate()?;
    fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("creating output directory {}", config.output_dir.display()))?;
    write_json(&config.output_dir.join("config.json"), config)
        .with_context(|| format!("output directory {} is not writable", config.output_dir.display()))?;
    let fingerprint = config.fingerprint();

    let mut settings = Vec::new();
    for &family in &config.families {
        for &dim in &config.dimensions {
            let setting = prepare_setting(config, family, dim)?;
            let existing = setting.records.lock().unwrap();
            if let Some(r) = existing.iter().find(|r| r.fingerprint != fingerprint) {
                bail!(
                    "{} holds records from a different setup (fingerprint {} vs {}); use another output directory",
                    setting.path.display(),
                    r.fingerprint,
                    fingerprint
                );
            }
            if !existing.is_empty() && !options.resume {
                bail!("{} already holds {} records; pass --resume to continue the grid", setting.path.display(), existing.len());
            }
            drop(existing);
            settings.push(setting);
        }
    }

    let mut report = ExperimentReport::default();
    let mut tasks = Vec::new();
    for (s, setting) in settings.iter().enumerate() {
        let done: BTreeSet<(String, u64, usize)> =
            setting.records.lock().unwrap().iter().map(|r| (r.algorithm.clone(), r.budget, r.run)).collect();
        for &kind in &config.algorithms {
            for &budget in &config.budgets {
                if is_expensive(setting.family, setting.dim, budget) && !options.allow_expensive {
                    warn!("skipping {kind} on {} D={} with budget {budget}; pass --allow-expensive", setting.family, setting.dim);
                    report.skipped_expensive += config.runs;
                    continue;
                }
                for r in 0..config.runs {
                    if done.contains(&(kind.name().to_string(), budget, r)) {
                        report.skipped_existing += 1;
                    } else {
                        tasks.push(Task { setting: s, kind, budget, run: r });
                    }
                }
            }
        }
    }
    info!("{} runs to execute, {} already recorded", tasks.len(), report.skipped_existing);

    let workers = options.workers.or_else(workers_from_env).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let results: Vec<std::result::Result<(), String>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| {
                let setting = &settings[task.setting];
                let label = format!("{} on {} D={} budget {} run {}", task.kind, setting.family, setting.dim, task.budget, task.run);
                let outcome = catch_unwind(AssertUnwindSafe(|| execute(config, setting, task, &fingerprint)));
                let record = match outcome {
                    Ok(Ok(record)) => record,
                    Ok(Err(e)) => return Err(format!("{label}: {e:#}")),
                    Err(panic) => {
                        let msg = panic
                            .downcast_ref::<&str>()
                            .map(|s| s.to_string())
                            .or_else(|| panic.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "panic".into());
                        return Err(format!("{label}: panicked: {msg}"));
                    }
                };
                let mut records = setting.records.lock().unwrap();
                records.push(record);
                records.sort_by_key(|r| r.key());
                write_records_file(&setting.path, &records).map_err(|e| format!("{label}: {e:#}"))?;
                info!("finished {label}");
                Ok(())
            })
            .collect()
    });
    for r in results {
        match r {
            Ok(()) => report.completed += 1,
            Err(e) => {
                warn!("run failed: {e}");
                report.failed.push(e);
            }
        }
    }
    Ok(report)
}
