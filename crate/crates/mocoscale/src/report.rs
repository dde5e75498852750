//! Summary tables and plot data from stored run records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use log::warn;
use mocoscale_core::algorithms::AlgorithmKind;

use crate::harness::{slug, RunRecord};
use crate::persist::{atomic_write, read_archive};
use crate::stats::{self, cells_from_adjusted, holm_adjust, pairwise_p_values, ComparisonCell, SampleSet};

/// Which p-values Holm adjusts together.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum HolmScope {
    /// All pairs within one (family, D, budget) setting.
    #[default]
    Setting,
    /// All pairs of all settings at once.
    Global,
}

impl FromStr for HolmScope {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "setting" => Ok(HolmScope::Setting),
            "global" => Ok(HolmScope::Global),
            _ => bail!("holm scope must be `setting` or `global`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SettingKey {
    pub family: String,
    pub dim: usize,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub runs: usize,
    pub mean: f64,
    pub sd: f64,
    /// `None` when the setting has a single algorithm.
    pub cell: Option<ComparisonCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SettingSummary {
    pub key: SettingKey,
    pub rows: Vec<SummaryRow>,
}

fn algorithm_order(name: &str) -> (usize, String) {
    let i = name.parse::<AlgorithmKind>().ok().and_then(|k| AlgorithmKind::ALL.iter().position(|&a| a == k));
    (i.unwrap_or(usize::MAX), name.to_string())
}

/// Final HVs grouped by setting and algorithm, in run order.
pub fn group_samples(records: &[RunRecord]) -> BTreeMap<SettingKey, Vec<SampleSet>> {
    let mut by_setting: BTreeMap<SettingKey, BTreeMap<(usize, String), Vec<(usize, f64)>>> = BTreeMap::new();
    for r in records {
        let key = SettingKey { family: r.family.clone(), dim: r.dim, budget: r.budget };
        by_setting.entry(key).or_default().entry(algorithm_order(&r.algorithm)).or_default().push((r.run, r.final_hv));
    }
    by_setting
        .into_iter()
        .map(|(key, algs)| {
            let mut samples = Vec::new();
            for ((_, algorithm), mut runs) in algs {
                runs.sort_by_key(|x| x.0);
                if runs.len() < 2 {
                    warn!(
                        "{} D={} budget {}: {} has {} run(s); at least 2 are needed, row omitted",
                        key.family,
                        key.dim,
                        key.budget,
                        algorithm,
                        runs.len()
                    );
                    continue;
                }
                samples.push(SampleSet {
                    algorithm,
                    problem: key.family.clone(),
                    dim: key.dim,
                    budget: key.budget,
                    hv_values: runs.into_iter().map(|x| x.1).collect(),
                });
            }
            (key, samples)
        })
        .collect()
}

/// Mean, SD and better/equal/worse counts per setting.
pub fn summarize(records: &[RunRecord], alpha: f64, scope: HolmScope) -> Result<Vec<SettingSummary>> {
    let groups = group_samples(records);
    let mut pairs_per_setting = Vec::new();
    for samples in groups.values() {
        pairs_per_setting.push(pairwise_p_values(samples)?);
    }
    match scope {
        HolmScope::Setting => {
            for pairs in &mut pairs_per_setting {
                let adjusted = holm_adjust(&pairs.iter().map(|p| p.2).collect::<Vec<_>>())?;
                for (p, a) in pairs.iter_mut().zip(adjusted) {
                    p.2 = a;
                }
            }
        }
        HolmScope::Global => {
            let raw: Vec<f64> = pairs_per_setting.iter().flatten().map(|p| p.2).collect();
            let mut adjusted = holm_adjust(&raw)?.into_iter();
            for p in pairs_per_setting.iter_mut().flatten() {
                p.2 = adjusted.next().unwrap();
            }
        }
    }
    let mut out = Vec::new();
    for ((key, samples), pairs) in groups.into_iter().zip(pairs_per_setting) {
        if samples.is_empty() {
            continue;
        }
        let cells = cells_from_adjusted(&samples, &pairs, alpha);
        let single = samples.len() == 1;
        let rows = samples
            .iter()
            .zip(cells)
            .map(|(s, c)| SummaryRow {
                algorithm: s.algorithm.clone(),
                runs: s.hv_values.len(),
                mean: s.mean(),
                sd: s.sd(),
                cell: (!single).then_some(c),
            })
            .collect();
        out.push(SettingSummary { key, rows });
    }
    Ok(out)
}

/// `1.72e+08` style, with two decimals.
pub fn sci(x: f64) -> String {
    let s = format!("{x:.2e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            format!("{mantissa}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
        }
        None => s,
    }
}

pub fn summary_csv(summaries: &[SettingSummary]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "D", "budget", "algorithm", "runs", "mean", "sd", "better", "equal", "worse"])?;
    for s in summaries {
        for r in &s.rows {
            let (b, e, wo) = match r.cell {
                Some(c) => (c.better.to_string(), c.equal.to_string(), c.worse.to_string()),
                None => Default::default(),
            };
            w.write_record([
                s.key.family.clone(),
                s.key.dim.to_string(),
                s.key.budget.to_string(),
                r.algorithm.clone(),
                r.runs.to_string(),
                r.mean.to_string(),
                r.sd.to_string(),
                b,
                e,
                wo,
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// One block per budget; a row of `mean (SD)` cells and a row of `b/e/w`
/// cells per (family, D), with one column per algorithm.
pub fn summary_text(summaries: &[SettingSummary]) -> String {
    let mut budgets: Vec<u64> = summaries.iter().map(|s| s.key.budget).collect();
    budgets.sort_unstable();
    budgets.dedup();
    let mut out = String::new();
    for budget in budgets {
        let block: Vec<&SettingSummary> = summaries.iter().filter(|s| s.key.budget == budget).collect();
        let mut algorithms: Vec<String> = block.iter().flat_map(|s| s.rows.iter().map(|r| r.algorithm.clone())).collect();
        algorithms.sort_by_key(|a| algorithm_order(a));
        algorithms.dedup();

        let mut table: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["Problem".to_string(), "D".to_string()];
        header.extend(algorithms.iter().cloned());
        table.push(header);
        for s in &block {
            let find = |a: &str| s.rows.iter().find(|r| r.algorithm == a);
            let mut stats_row = vec![s.key.family.clone(), s.key.dim.to_string()];
            let mut cell_row = vec![String::new(), String::new()];
            for a in &algorithms {
                match find(a) {
                    Some(r) => {
                        stats_row.push(format!("{} ({})", sci(r.mean), sci(r.sd)));
                        cell_row.push(r.cell.map(|c| c.to_string()).unwrap_or_default());
                    }
                    None => {
                        stats_row.push("-".into());
                        cell_row.push(String::new());
                    }
                }
            }
            table.push(stats_row);
            table.push(cell_row);
        }
        let widths: Vec<usize> =
            (0..table[0].len()).map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0)).collect();
        let _ = writeln!(out, "Budget {budget}");
        for row in &table {
            let line: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out.push('\n');
    }
    out
}

/// Writes `summary.csv` and `summary.txt` into `out_dir`.
pub fn write_summary(records: &[RunRecord], out_dir: &Path, alpha: f64, scope: HolmScope) -> Result<Vec<SettingSummary>> {
    let summaries = summarize(records, alpha, scope)?;
    atomic_write(&out_dir.join("summary.csv"), summary_csv(&summaries)?.as_bytes())?;
    atomic_write(&out_dir.join("summary.txt"), summary_text(&summaries).as_bytes())?;
    Ok(summaries)
}

/// Mean and SD of HV at each checkpoint over runs of one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryBand {
    pub algorithm: String,
    pub eval_count: u64,
    pub mean: f64,
    pub sd: f64,
    pub runs: usize,
}

pub fn trajectory_bands(records: &[&RunRecord]) -> Vec<TrajectoryBand> {
    let mut by_alg: BTreeMap<(usize, String), BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    for r in records {
        let per_eval = by_alg.entry(algorithm_order(&r.algorithm)).or_default();
        for &(e, hv) in &r.trajectory {
            per_eval.entry(e).or_default().push(hv);
        }
    }
    let mut out = Vec::new();
    for ((_, algorithm), per_eval) in by_alg {
        for (eval_count, hvs) in per_eval {
            out.push(TrajectoryBand {
                algorithm: algorithm.clone(),
                eval_count,
                mean: stats::mean(&hvs),
                sd: stats::sd(&hvs),
                runs: hvs.len(),
            });
        }
    }
    out
}

/// The run whose final HV is closest to the mean over runs (ties: lower
/// run index).
pub fn representative<'a>(runs: &[&'a RunRecord]) -> Option<&'a RunRecord> {
    let hv: Vec<f64> = runs.iter().map(|r| r.final_hv).collect();
    if hv.is_empty() {
        return None;
    }
    let mu = stats::mean(&hv);
    runs.iter().copied().min_by(|a, b| (a.final_hv - mu).abs().total_cmp(&(b.final_hv - mu).abs()).then(a.run.cmp(&b.run)))
}

/// Writes scatter CSVs for every run, `trajectory.csv` with per-algorithm
/// mean and SD, and `representative.csv` naming each algorithm's
/// representative run. Returns the files written.
pub fn export_plot_data(
    records: &[RunRecord],
    records_dir: &Path,
    family: &str,
    dim: usize,
    budget: u64,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let selected: Vec<&RunRecord> =
        records.iter().filter(|r| r.family.eq_ignore_ascii_case(family) && r.dim == dim && r.budget == budget).collect();
    if selected.is_empty() {
        bail!("no records for {family} D={dim} budget {budget}");
    }
    let mut written = Vec::new();

    let mut algorithms: Vec<(usize, String)> = selected.iter().map(|r| algorithm_order(&r.algorithm)).collect();
    algorithms.sort();
    algorithms.dedup();
    let mut rep_csv = csv::Writer::from_writer(Vec::new());
    rep_csv.write_record(["algorithm", "run", "final_hv", "mean_hv", "scatter"])?;
    for (_, algorithm) in &algorithms {
        let mut runs: Vec<&RunRecord> = selected.iter().copied().filter(|r| &r.algorithm == algorithm).collect();
        runs.sort_by_key(|r| r.run);
        let name = algorithm.parse::<AlgorithmKind>().map(slug).unwrap_or_else(|_| algorithm.to_lowercase());
        for r in &runs {
            let rows = read_archive(&records_dir.join(&r.archive_path))
                .with_context(|| format!("archive of {} run {}", r.algorithm, r.run))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let m = rows.first().map_or(r.m, |x| x.objectives.len());
            w.write_record((1..=m).map(|j| format!("f{j}")))?;
            for row in rows {
                w.write_record(row.objectives.iter().map(|v| v.to_string()))?;
            }
            let path = out_dir.join("scatter").join(format!("{name}-r{}.csv", r.run));
            atomic_write(&path, &w.into_inner()?)?;
            written.push(path);
        }
        let rep = representative(&runs).expect("at least one run");
        let mean = stats::mean(&runs.iter().map(|r| r.final_hv).collect::<Vec<_>>());
        rep_csv.write_record([
            algorithm.clone(),
            rep.run.to_string(),
            rep.final_hv.to_string(),
            mean.to_string(),
            format!("scatter/{name}-r{}.csv", rep.run),
        ])?;
    }
    let path = out_dir.join("representative.csv");
    atomic_write(&path, &rep_csv.into_inner()?)?;
    written.push(path);

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["algorithm", "eval_count", "mean", "sd", "runs"])?;
    for b in trajectory_bands(&selected) {
        w.write_record([b.algorithm, b.eval_count.to_string(), b.mean.to_string(), b.sd.to_string(), b.runs.to_string()])?;
    }
    let path = out_dir.join("trajectory.csv");
    atomic_write(&path, &w.into_inner()?)?;
    written.push(path);
    Ok(written)
}
