use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::StreamRng;

/// Multi-objective 0-1 knapsack instance: `m` value/weight profiles over
/// `dim` items, each capacity half of the corresponding total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MokpInstance {
    dim: usize,
    m: usize,
    /// `values[j * dim + i]`.
    values: Vec<u32>,
    weights: Vec<u32>,
    capacities: Vec<f64>,
    /// Items in the order repair removes them.
    removal_order: Vec<usize>,
}

impl MokpInstance {
    pub(crate) fn generate(dim: usize, m: usize, rng: &mut StreamRng) -> Self {
        let values = (0..m * dim).map(|_| rng.gen_range(10..=100u32)).collect();
        let weights = (0..m * dim).map(|_| rng.gen_range(10..=100u32)).collect();
        Self::build(dim, m, values, weights)
    }

    pub fn from_profiles(dim: usize, m: usize, values: Vec<u32>, weights: Vec<u32>) -> Result<Self> {
        if values.len() != m * dim || weights.len() != m * dim {
            return Err(Error::InvalidParameters("value and weight data must hold m*D entries"));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidParameters("weights must be positive"));
        }
        Ok(Self::build(dim, m, values, weights))
    }

    fn build(dim: usize, m: usize, values: Vec<u32>, weights: Vec<u32>) -> Self {
        let capacities = (0..m)
            .map(|j| weights[j * dim..(j + 1) * dim].iter().map(|&w| w as f64).sum::<f64>() / 2.0)
            .collect();
        let best_ratio: Vec<f64> = (0..dim)
            .map(|i| {
                (0..m)
                    .map(|j| values[j * dim + i] as f64 / weights[j * dim + i] as f64)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let mut removal_order: Vec<usize> = (0..dim).collect();
        removal_order.sort_by(|&a, &b| {
            best_ratio[a].partial_cmp(&best_ratio[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b))
        });
        MokpInstance { dim, m, values, weights, capacities, removal_order }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn value(&self, j: usize, i: usize) -> u32 {
        self.values[j * self.dim + i]
    }

    #[inline]
    pub fn weight(&self, j: usize, i: usize) -> u32 {
        self.weights[j * self.dim + i]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    /// Items sorted by ascending `max_j v_ji / w_ji`, ties by index.
    pub fn removal_order(&self) -> &[usize] {
        &self.removal_order
    }

    fn loads(&self, bits: &[bool]) -> Vec<f64> {
        (0..self.m)
            .map(|j| {
                bits.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| self.weight(j, i) as f64)
                    .sum()
            })
            .collect()
    }

    pub fn is_feasible(&self, bits: &[bool]) -> bool {
        self.loads(bits).iter().zip(&self.capacities).all(|(l, c)| l <= c)
    }

    /// Drops selected items, worst profit/weight ratio first, until every
    /// capacity holds. Feasible inputs are returned unchanged.
    pub fn repair(&self, bits: &mut [bool]) {
        let mut loads = self.loads(bits);
        let over = |loads: &[f64]| loads.iter().zip(&self.capacities).any(|(l, c)| l > c);
        if !over(&loads) {
            return;
        }
        for &i in &self.removal_order {
            if !bits[i] {
                continue;
            }
            bits[i] = false;
            for (j, load) in loads.iter_mut().enumerate() {
                *load -= self.weight(j, i) as f64;
            }
            if !over(&loads) {
                return;
            }
        }
    }

    /// Total value per knapsack (native, maximised orientation).
    pub fn profits(&self, bits: &[bool]) -> Vec<f64> {
        (0..self.m)
            .map(|j| {
                bits.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| self.value(j, i) as f64)
                    .sum()
            })
            .collect()
    }
}
