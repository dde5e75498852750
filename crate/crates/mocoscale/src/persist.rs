//! On-disk formats: instance and reference point JSON, archive CSV.

use std::fs::{self, File};
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use mocoscale_core::indicators::{Provenance, ReferencePoint};
use mocoscale_core::problems::{
    MokpInstance, MonkInstance, MoqapInstance, MotspInstance, InstanceData, GENERATOR_VERSION,
};
use mocoscale_core::{generate_instance, Archive, Family, ObjectiveVector, ProblemInstance};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

/// Writes `bytes` next to `path` and renames into place, so readers never
/// see a half-written file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming {} into place", tmp.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddedData {
    Motsp { cost: Vec<f64> },
    Mokp { values: Vec<u32>, weights: Vec<u32> },
    Monk { k: usize, contribution_seed: u64, links: Vec<u32> },
    Moqap { flow: Vec<f64>, dist: Vec<f64> },
}

/// Instance description. Without `data` the matrices are regenerated from
/// the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub family: String,
    #[serde(rename = "D")]
    pub dim: usize,
    pub m: usize,
    pub seed: u64,
    pub generator_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<EmbeddedData>,
}

impl InstanceFile {
    pub fn describe(instance: &ProblemInstance, embed: bool) -> Self {
        let data = embed.then(|| match instance.data() {
            InstanceData::Motsp(p) => EmbeddedData::Motsp { cost: p.costs().to_vec() },
            InstanceData::Mokp(p) => EmbeddedData::Mokp { values: p.values().to_vec(), weights: p.weights().to_vec() },
            InstanceData::Monk(p) => {
                EmbeddedData::Monk { k: p.k(), contribution_seed: p.contribution_seed(), links: p.links().to_vec() }
            }
            InstanceData::Moqap(p) => EmbeddedData::Moqap { flow: p.flows().to_vec(), dist: p.distances().to_vec() },
        });
        InstanceFile {
            family: instance.family().name().to_string(),
            dim: instance.dim(),
            m: instance.m(),
            seed: instance.seed(),
            generator_version: GENERATOR_VERSION,
            data,
        }
    }

    pub fn family(&self) -> Result<Family> {
        self.family.parse().map_err(|_| anyhow::anyhow!("unknown family {:?}", self.family))
    }

    pub fn instantiate(&self) -> Result<ProblemInstance> {
        let family = self.family()?;
        let (d, m) = (self.dim, self.m);
        let data = match &self.data {
            None => {
                if self.generator_version != GENERATOR_VERSION {
                    bail!(
                        "instance was generated by generator version {}, this build has {}; embed the data to move it across versions",
                        self.generator_version,
                        GENERATOR_VERSION
                    );
                }
                return Ok(generate_instance(family, d, m, self.seed)?);
            }
            Some(EmbeddedData::Motsp { cost }) => InstanceData::Motsp(MotspInstance::from_costs(d, m, cost.clone())?),
            Some(EmbeddedData::Mokp { values, weights }) => {
                InstanceData::Mokp(MokpInstance::from_profiles(d, m, values.clone(), weights.clone())?)
            }
            Some(EmbeddedData::Monk { k, contribution_seed, links }) => {
                InstanceData::Monk(MonkInstance::from_links(d, m, *k, *contribution_seed, links.clone())?)
            }
            Some(EmbeddedData::Moqap { flow, dist }) => {
                InstanceData::Moqap(MoqapInstance::from_matrices(d, m, flow.clone(), dist.clone())?)
            }
        };
        let instance = ProblemInstance::from_data(self.seed, data);
        if instance.family() != family || instance.dim() != d || instance.m() != m {
            bail!("embedded data does not match {} with D = {}, m = {}", family, d, m);
        }
        Ok(instance)
    }
}

pub fn save_instance(path: &Path, instance: &ProblemInstance, embed: bool) -> Result<()> {
    write_json(path, &InstanceFile::describe(instance, embed))
}

pub fn load_instance(path: &Path) -> Result<ProblemInstance> {
    read_json::<InstanceFile>(path)?.instantiate()
}

pub fn instance_id(instance: &ProblemInstance) -> String {
    format!("{}-D{}-m{}-s{}", instance.family(), instance.dim(), instance.m(), instance.seed())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

/// Reference point in the problem's native orientation, with the sense of
/// each objective so it can be used without the instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFile {
    pub instance_id: String,
    pub n_samples: usize,
    pub sampling_seed: u64,
    pub values: Vec<f64>,
    pub senses: Vec<Sense>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<usize>,
}

impl ReferenceFile {
    pub fn describe(instance: &ProblemInstance, reference: &ReferencePoint) -> Self {
        let (n_samples, sampling_seed) = match reference.provenance {
            Provenance::Sampled { seed, n_samples } => (n_samples, seed),
            Provenance::Explicit => (0, 0),
        };
        let sense = if instance.family().maximises() { Sense::Max } else { Sense::Min };
        ReferenceFile {
            instance_id: instance_id(instance),
            n_samples,
            sampling_seed,
            values: instance.to_native(&reference.values),
            senses: vec![sense; instance.m()],
            degenerate: reference.degenerate.clone(),
        }
    }

    /// The point in minimisation orientation.
    pub fn canonical(&self) -> ObjectiveVector {
        canonicalise(&self.values, &self.senses)
    }
}

pub fn canonicalise(values: &[f64], senses: &[Sense]) -> ObjectiveVector {
    ObjectiveVector::new(values.iter().zip(senses).map(|(&v, s)| if *s == Sense::Max { -v } else { v }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveRow {
    pub objectives: Vec<f64>,
    pub genotype: Option<String>,
}

fn is_gz(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gz")
}

/// Writes archive members as CSV (`f1,..,fm,genotype`) in native
/// orientation, gzip-compressed when the path ends in `.gz`.
pub fn write_archive(path: &Path, instance: &ProblemInstance, archive: &Archive) -> Result<()> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let m = instance.m();
        let mut header: Vec<String> = (1..=m).map(|j| format!("f{j}")).collect();
        header.push("genotype".into());
        w.write_record(&header)?;
        for ind in archive.members() {
            let mut row: Vec<String> = instance.to_native(&ind.objectives).iter().map(|v| v.to_string()).collect();
            row.push(ind.genotype.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    if is_gz(path) {
        let mut enc = GzEncoder::new(Vec::new(), Compression::default());
        enc.write_all(&buf)?;
        buf = enc.finish()?;
    }
    atomic_write(path, &buf)
}

/// Reads an archive CSV written by [`write_archive`] or by hand: columns
/// named `f1..fm`, optional `genotype`.
pub fn read_archive(path: &Path) -> Result<Vec<ArchiveRow>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let reader: Box<dyn Read> =
        if is_gz(path) { Box::new(GzDecoder::new(BufReader::new(file))) } else { Box::new(BufReader::new(file)) };
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    let objective_cols: Vec<usize> =
        (0..header.len()).filter(|&i| header[i].starts_with('f') && header[i][1..].parse::<usize>().is_ok()).collect();
    if objective_cols.is_empty() {
        bail!("{}: no objective columns (expected f1, f2, ...)", path.display());
    }
    let genotype_col = header.iter().position(|h| h == "genotype");
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let objectives = objective_cols
            .iter()
            .map(|&i| {
                rec[i].trim().parse::<f64>().with_context(|| format!("{}: row {}: bad number", path.display(), line + 1))
            })
            .collect::<Result<Vec<f64>>>()?;
        let genotype = genotype_col.map(|i| rec[i].to_string()).filter(|g| !g.is_empty());
        rows.push(ArchiveRow { objectives, genotype });
    }
    Ok(rows)
}

