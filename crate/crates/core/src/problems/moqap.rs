use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::StreamRng;

/// Side length of the square locations are scattered in.
pub const PLANE_SIZE: f64 = 5000.0;
/// Upper bound of flow entries.
pub const MAX_FLOW: f64 = 100.0;

/// Multi-objective quadratic assignment instance: `m` flow matrices between
/// facilities and one Euclidean distance matrix between locations.
#[derive(Debug, Clone, PartialEq)]
pub struct MoqapInstance {
    dim: usize,
    m: usize,
    /// `flow[(j * dim + u) * dim + v]`.
    flow: Vec<f64>,
    /// `dist[p * dim + q]`.
    dist: Vec<f64>,
}

impl MoqapInstance {
    pub(crate) fn generate(dim: usize, m: usize, rng: &mut StreamRng) -> Self {
        let mut flow = Vec::with_capacity(m * dim * dim);
        for _ in 0..m {
            for u in 0..dim {
                for v in 0..dim {
                    flow.push(if u == v { 0.0 } else { rng.gen_range(0.0..=MAX_FLOW) });
                }
            }
        }
        let points: Vec<(f64, f64)> = (0..dim)
            .map(|_| (rng.gen_range(0.0..=PLANE_SIZE), rng.gen_range(0.0..=PLANE_SIZE)))
            .collect();
        let mut dist = Vec::with_capacity(dim * dim);
        for &(px, py) in &points {
            for &(qx, qy) in &points {
                dist.push(libm::hypot(px - qx, py - qy));
            }
        }
        MoqapInstance { dim, m, flow, dist }
    }

    pub fn from_matrices(dim: usize, m: usize, flow: Vec<f64>, dist: Vec<f64>) -> Result<Self> {
        if flow.len() != m * dim * dim || dist.len() != dim * dim {
            return Err(Error::InvalidParameters("flow must hold m*D*D and distance D*D entries"));
        }
        if flow.iter().chain(&dist).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameters("matrix entries must be finite"));
        }
        Ok(MoqapInstance { dim, m, flow, dist })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn flows(&self) -> &[f64] {
        &self.flow
    }

    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    #[inline]
    pub fn flow(&self, j: usize, u: usize, v: usize) -> f64 {
        self.flow[(j * self.dim + u) * self.dim + v]
    }

    #[inline]
    pub fn dist(&self, p: usize, q: usize) -> f64 {
        self.dist[p * self.dim + q]
    }

    /// `sum_u sum_v flow_j[u][v] * dist[pi(u)][pi(v)]`, where `pi(u)` is the
    /// location of facility `u`.
    pub fn cost(&self, assignment: &[usize], j: usize) -> f64 {
        let d = self.dim;
        let mut total = 0.0;
        for u in 0..d {
            let row = &self.flow[(j * d + u) * d..(j * d + u + 1) * d];
            let drow = &self.dist[assignment[u] * d..(assignment[u] + 1) * d];
            for v in 0..d {
                total += row[v] * drow[assignment[v]];
            }
        }
        total
    }

    /// Change in cost of objective `j` when facilities `r` and `s` swap locations.
    pub fn swap_delta(&self, assignment: &[usize], r: usize, s: usize, j: usize) -> f64 {
        if r == s {
            return 0.0;
        }
        let (a, b) = (assignment[r], assignment[s]);
        let mut delta = 0.0;
        for (k, &p) in assignment.iter().enumerate() {
            if k == r || k == s {
                continue;
            }
            delta += self.flow(j, r, k) * (self.dist(b, p) - self.dist(a, p))
                + self.flow(j, k, r) * (self.dist(p, b) - self.dist(p, a))
                + self.flow(j, s, k) * (self.dist(a, p) - self.dist(b, p))
                + self.flow(j, k, s) * (self.dist(p, a) - self.dist(p, b));
        }
        delta + self.flow(j, r, r) * (self.dist(b, b) - self.dist(a, a))
            + self.flow(j, s, s) * (self.dist(a, a) - self.dist(b, b))
            + self.flow(j, r, s) * (self.dist(b, a) - self.dist(a, b))
            + self.flow(j, s, r) * (self.dist(a, b) - self.dist(b, a))
    }
}
