//! Hypervolume checkpoints along a run.

use alloc::vec::Vec;

use crate::algorithms::{EvaluationEvent, Observer};
use crate::archive::Archive;
use crate::indicators::archive_hypervolume;
use crate::objective::ObjectiveVector;

/// Checkpoints per decade of evaluations.
pub const POINTS_PER_DECADE: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub eval_count: u64,
    pub hv: f64,
}

/// Geometrically spaced evaluation counts `round(10^(k/25))`, deduplicated,
/// up to and always including `budget`. The grid is the same for every run,
/// so trajectories of different runs line up without interpolation.
pub fn checkpoint_grid(budget: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = Vec::new();
    for k in 0.. {
        let c = libm::round(libm::pow(10.0, k as f64 / POINTS_PER_DECADE as f64)) as u64;
        if c > budget {
            break;
        }
        if grid.last() != Some(&c) {
            grid.push(c);
        }
    }
    if grid.last() != Some(&budget) && budget > 0 {
        grid.push(budget);
    }
    grid
}

/// Observer that records the archive hypervolume at every checkpoint.
#[derive(Debug, Clone)]
pub struct TrajectoryRecorder {
    reference: ObjectiveVector,
    grid: Vec<u64>,
    next: usize,
    points: Vec<TrajectoryPoint>,
}

impl TrajectoryRecorder {
    pub fn new(reference: ObjectiveVector, budget: u64) -> Self {
        let grid = checkpoint_grid(budget);
        TrajectoryRecorder { reference, points: Vec::with_capacity(grid.len()), grid, next: 0 }
    }

    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<TrajectoryPoint> {
        self.points
    }
}

impl Observer for TrajectoryRecorder {
    fn on_evaluation(&mut self, event: &EvaluationEvent<'_>, archive: &Archive) {
        if self.grid.get(self.next) == Some(&event.eval_index) {
            let hv = archive_hypervolume(archive, &self.reference).unwrap_or(f64::NAN);
            self.points.push(TrajectoryPoint { eval_count: event.eval_index, hv });
            self.next += 1;
        }
    }
}
