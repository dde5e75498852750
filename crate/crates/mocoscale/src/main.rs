use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::error;
use mocoscale::harness::{load_records, run_experiment, ExperimentConfig, RunOptions};
use mocoscale::persist::{canonicalise, load_instance, read_archive, read_json, save_instance, write_json, ReferenceFile};
use mocoscale::report::{export_plot_data, write_summary, HolmScope};
use mocoscale_core::indicators::{hypervolume_2d, sample_reference_point};
use mocoscale_core::{generate_instance, Family, ObjectiveVector};

#[derive(Parser)]
#[command(name = "mocoscale", version, about = "Benchmark harness for multi-objective evolutionary algorithms on combinatorial problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a problem instance.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        objectives: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Store the generated matrices in the file.
        #[arg(long)]
        embed_data: bool,
    },
    /// Run an experiment grid.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, env = "MOCOSCALE_WORKERS")]
        workers: Option<usize>,
        #[arg(long)]
        resume: bool,
        /// Also run 5000-D MOQAP at 10^7 evaluations.
        #[arg(long)]
        allow_expensive: bool,
    },
    /// Hypervolume of an archive CSV against a reference point file.
    Hv {
        #[arg(long)]
        archive: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
    },
    /// Sample a reference point for an instance.
    Refpoint {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tables of mean (SD) and better/equal/worse counts.
    Summarize {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "setting")]
        holm_scope: HolmScope,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Scatter and trajectory CSVs for one setting.
    PlotData {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        family: Family,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen { family, dim, objectives, seed, out, embed_data } => {
            let instance = generate_instance(family, dim, objectives, seed)?;
            save_instance(&out, &instance, embed_data)?;
        }
        Command::Run { config, workers, resume, allow_expensive } => {
            let config = ExperimentConfig::load(&config)?;
            let report = run_experiment(&config, &RunOptions { workers, resume, allow_expensive })?;
            println!(
                "completed {}, already recorded {}, skipped as expensive {}, failed {}",
                report.completed,
                report.skipped_existing,
                report.skipped_expensive,
                report.failed.len()
            );
            if !report.failed.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Hv { archive, reference } => {
            let reference: ReferenceFile = read_json(&reference)?;
            if reference.values.len() != 2 {
                bail!("exact hypervolume is implemented for two objectives only");
            }
            let r = reference.canonical();
            let points: Vec<ObjectiveVector> = read_archive(&archive)?
                .iter()
                .map(|row| canonicalise(&row.objectives, &reference.senses))
                .collect();
            if let Some(p) = points.iter().find(|p| p.m() != r.m()) {
                bail!("archive has {} objectives, reference point has {}", p.m(), r.m());
            }
            println!("{}", hypervolume_2d(&points, &r)?);
        }
        Command::Refpoint { instance, samples, seed, out } => {
            let instance = load_instance(&instance).with_context(|| format!("loading {}", instance.display()))?;
            let r = sample_reference_point(&instance, samples, seed)?;
            write_json(&out, &ReferenceFile::describe(&instance, &r))?;
        }
        Command::Summarize { records, out, holm_scope, alpha } => {
            let all = load_records(&records)?;
            write_summary(&all, &out, alpha, holm_scope)?;
        }
        Command::PlotData { records, family, dim, budget, out } => {
            let all = load_records(&records)?;
            export_plot_data(&all, &records, family.name(), dim, budget, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
