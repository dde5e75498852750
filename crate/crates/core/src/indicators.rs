//! Exact bi-objective hypervolume, per-point contributions, and the
//! random-sampling reference point.

use alloc::vec::Vec;

use crate::archive::Archive;
use crate::error::{Error, Result};
use crate::objective::{non_dominated_filter, ObjectiveVector};
use crate::problems::{from_native, ProblemInstance};
use crate::seed::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Sampled { seed: u64, n_samples: usize },
    Explicit,
}

/// Hypervolume reference point in minimisation orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint {
    pub values: ObjectiveVector,
    pub provenance: Provenance,
    /// Objectives on which the sampled front was flat (`max == min`), so no
    /// offset could be applied.
    pub degenerate: Vec<usize>,
}

impl ReferencePoint {
    pub fn explicit(values: ObjectiveVector) -> Self {
        ReferencePoint { values, provenance: Provenance::Explicit, degenerate: Vec::new() }
    }
}

fn inside(p: &ObjectiveVector, r: &ObjectiveVector) -> bool {
    p[0] < r[0] && p[1] < r[1]
}

fn check_2d(set: &[ObjectiveVector], r: &ObjectiveVector) -> Result<()> {
    if r.m() != 2 {
        return Err(Error::HypervolumeDimension(r.m()));
    }
    match set.iter().find(|p| p.m() != 2) {
        Some(p) => Err(Error::HypervolumeDimension(p.m())),
        None => Ok(()),
    }
}

/// Area dominated by `set` and bounded by `reference`. Points that do not
/// strictly dominate the reference point contribute nothing; dominated
/// points are harmless.
pub fn hypervolume_2d(set: &[ObjectiveVector], reference: &ObjectiveVector) -> Result<f64> {
    check_2d(set, reference)?;
    let mut pts: Vec<&ObjectiveVector> = set.iter().filter(|p| inside(p, reference)).collect();
    pts.sort_by(|a, b| a.lex_cmp(b));
    Ok(sweep(pts.into_iter(), reference))
}

// Points must arrive sorted by the first objective.
fn sweep<'a>(pts: impl Iterator<Item = &'a ObjectiveVector>, r: &ObjectiveVector) -> f64 {
    let mut area = 0.0;
    let mut ceiling = r[1];
    for p in pts {
        if p[1] < ceiling {
            area += (r[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    area
}

/// Hypervolume of an archive; its members are already sorted.
pub fn archive_hypervolume(archive: &Archive, reference: &ObjectiveVector) -> Result<f64> {
    if reference.m() != 2 {
        return Err(Error::HypervolumeDimension(reference.m()));
    }
    if let Some(m) = archive.m().filter(|&m| m != 2) {
        return Err(Error::HypervolumeDimension(m));
    }
    Ok(sweep(archive.objectives().filter(|p| inside(p, reference)), reference))
}

/// Number of points that do not strictly dominate the reference point.
pub fn count_outside(set: &[ObjectiveVector], reference: &ObjectiveVector) -> usize {
    set.iter().filter(|p| !inside(p, reference)).count()
}

/// Exclusive contribution of every member of a mutually non-dominated front:
/// `HV(front) - HV(front without i)`. Identical members contribute zero.
pub fn hv_contributions(front: &[ObjectiveVector], reference: &ObjectiveVector) -> Result<Vec<f64>> {
    check_2d(front, reference)?;
    let mut order: Vec<usize> = (0..front.len()).collect();
    order.sort_by(|&a, &b| front[a].lex_cmp(&front[b]));

    // Sorted lexicographically, a member is dominated iff an earlier,
    // non-identical member has a second objective no larger than its own.
    let mut best_f2 = f64::INFINITY;
    for (k, &i) in order.iter().enumerate() {
        let p = &front[i];
        if k > 0 && front[order[k - 1]] == *p {
            continue;
        }
        if best_f2 <= p[1] {
            return Err(Error::DominatedMember);
        }
        best_f2 = p[1];
    }

    let inner: Vec<usize> = order.into_iter().filter(|&i| inside(&front[i], reference)).collect();
    let mut contrib = alloc::vec![0.0; front.len()];
    for (k, &i) in inner.iter().enumerate() {
        let p = &front[i];
        let right = inner.get(k + 1).map_or(reference[0], |&n| front[n][0]);
        let up = if k == 0 { reference[1] } else { front[inner[k - 1]][1] };
        contrib[i] = (right - p[0]) * (up - p[1]);
    }
    Ok(contrib)
}

/// `min - (max - min)/10` for maximised objectives, `max + (max - min)/10`
/// for minimised ones.
pub fn nadir_offset(min: f64, max: f64, maximise: bool) -> f64 {
    let span = (max - min) / 10.0;
    if maximise {
        min - span
    } else {
        max + span
    }
}

/// Reference point from `n_samples` uniformly random solutions: the nadir
/// of their non-dominated subset, pushed outwards by a tenth of the range.
pub fn sample_reference_point(problem: &ProblemInstance, n_samples: usize, seed: u64) -> Result<ReferencePoint> {
    if n_samples < 2 {
        return Err(Error::InvalidParameters("at least two samples are needed"));
    }
    let mut rng = stream(seed);
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let g = problem.random_genotype(&mut rng);
        samples.push(problem.evaluate(&g)?);
    }
    let front = non_dominated_filter(&samples)?;
    let natives: Vec<Vec<f64>> = front.iter().map(|&i| problem.to_native(&samples[i])).collect();

    let maximise = problem.family().maximises();
    let mut native_ref = Vec::with_capacity(problem.m());
    let mut degenerate = Vec::new();
    for j in 0..problem.m() {
        let (lo, hi) = natives
            .iter()
            .map(|z| z[j])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo == hi {
            degenerate.push(j);
        }
        native_ref.push(nadir_offset(lo, hi, maximise));
    }
    Ok(ReferencePoint {
        values: from_native(problem.family(), &native_ref),
        provenance: Provenance::Sampled { seed, n_samples },
        degenerate,
    })
}

#[cfg(test)]
mod tests;
