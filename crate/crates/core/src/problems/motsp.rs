use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::StreamRng;

/// Multi-objective travelling salesman instance with `m` independent cost
/// matrices. Generated matrices are symmetric; explicit ones may not be.
#[derive(Debug, Clone, PartialEq)]
pub struct MotspInstance {
    dim: usize,
    m: usize,
    /// `cost[(j * dim + u) * dim + v]` is the cost of edge `u -> v` under objective `j`.
    cost: Vec<f64>,
    symmetric: bool,
}

impl MotspInstance {
    pub(crate) fn generate(dim: usize, m: usize, rng: &mut StreamRng) -> Self {
        // One draw per unordered pair of cities, row by row above the diagonal.
        let mut cost = alloc::vec![0.0; m * dim * dim];
        for j in 0..m {
            let base = j * dim * dim;
            for u in 0..dim {
                for v in u + 1..dim {
                    let c = rng.gen::<f64>();
                    cost[base + u * dim + v] = c;
                    cost[base + v * dim + u] = c;
                }
            }
        }
        MotspInstance { dim, m, cost, symmetric: true }
    }

    /// Builds an instance from explicit matrices, `costs[j][u][v]` flattened row-major.
    pub fn from_costs(dim: usize, m: usize, cost: Vec<f64>) -> Result<Self> {
        if cost.len() != m * dim * dim {
            return Err(Error::InvalidParameters("cost data must hold m*D*D entries"));
        }
        if cost.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameters("costs must be finite"));
        }
        let symmetric = (0..m).all(|j| {
            let base = j * dim * dim;
            (0..dim).all(|u| (0..u).all(|v| cost[base + u * dim + v] == cost[base + v * dim + u]))
        });
        Ok(MotspInstance { dim, m, cost, symmetric })
    }

    /// Whether every matrix satisfies `c(u, v) == c(v, u)`.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn costs(&self) -> &[f64] {
        &self.cost
    }

    #[inline]
    pub fn cost(&self, j: usize, u: usize, v: usize) -> f64 {
        self.cost[(j * self.dim + u) * self.dim + v]
    }

    /// Cost of the closed tour, including the edge back to the first city.
    pub fn tour_cost(&self, tour: &[usize], j: usize) -> f64 {
        let d = tour.len();
        let mut total = 0.0;
        for k in 0..d {
            total += self.cost(j, tour[k], tour[(k + 1) % d]);
        }
        total
    }

    /// Change in cost of objective `j` when `tour[i..=k]` is reversed.
    pub fn reversal_delta(&self, tour: &[usize], i: usize, k: usize, j: usize) -> f64 {
        let d = tour.len();
        if i >= k || (self.symmetric && k - i + 1 == d) {
            return 0.0;
        }
        let prev = tour[(i + d - 1) % d];
        let next = tour[(k + 1) % d];
        let (first, last) = (tour[i], tour[k]);
        let boundary = self.cost(j, prev, last) + self.cost(j, first, next)
            - self.cost(j, prev, first)
            - self.cost(j, last, next);
        if self.symmetric {
            return boundary;
        }
        // Reversing the segment flips the direction of every edge inside it.
        let mut delta = 0.0;
        for t in i..k {
            let (a, b) = (tour[t], tour[t + 1]);
            delta += self.cost(j, b, a) - self.cost(j, a, b);
        }
        if k - i + 1 == d {
            // Whole cycle reversed: the closing edge flips too.
            let (a, b) = (tour[d - 1], tour[0]);
            return delta + self.cost(j, b, a) - self.cost(j, a, b);
        }
        delta + boundary
    }
}
