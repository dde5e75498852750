use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::seed::{hash_words, unit_f64, StreamRng};

/// Default number of interacting bits per position.
pub const DEFAULT_K: usize = 10;

/// Multi-objective NK landscape.
///
/// Contribution tables are never stored: `c_ij(pattern)` is a counter-based
/// hash of `(contribution_seed, i, j, pattern)` mapped to `[0, 1)`, which
/// keeps a 5000-bit instance to a few hundred kilobytes.
#[derive(Debug, Clone, PartialEq)]
pub struct MonkInstance {
    dim: usize,
    m: usize,
    k: usize,
    contribution_seed: u64,
    /// `links[(i * m + j) * k + t]`: t-th bit interacting with bit `i` under objective `j`.
    links: Vec<u32>,
    /// For each `(j, b)`, the positions whose contribution under `j` reads bit `b`
    /// (including `b` itself).
    readers: Vec<Vec<u32>>,
}

impl MonkInstance {
    pub(crate) fn generate(dim: usize, m: usize, k: usize, rng: &mut StreamRng) -> Result<Self> {
        if k >= dim {
            return Err(Error::InteractionOrderTooLarge { k, dim });
        }
        if k + 1 > 63 {
            return Err(Error::InvalidParameters("K must be at most 62"));
        }
        let contribution_seed = rng.next_u64();
        let mut links = Vec::with_capacity(dim * m * k);
        let mut picked: Vec<u32> = Vec::with_capacity(k);
        for i in 0..dim {
            for _ in 0..m {
                picked.clear();
                while picked.len() < k {
                    let cand = rng.gen_range(0..dim) as u32;
                    if cand as usize != i && !picked.contains(&cand) {
                        picked.push(cand);
                    }
                }
                links.extend_from_slice(&picked);
            }
        }
        Ok(Self::build(dim, m, k, contribution_seed, links))
    }

    pub fn from_links(dim: usize, m: usize, k: usize, contribution_seed: u64, links: Vec<u32>) -> Result<Self> {
        if k >= dim {
            return Err(Error::InteractionOrderTooLarge { k, dim });
        }
        if links.len() != dim * m * k {
            return Err(Error::InvalidParameters("link data must hold D*m*K entries"));
        }
        for i in 0..dim {
            for j in 0..m {
                let row = &links[(i * m + j) * k..(i * m + j + 1) * k];
                for (t, &b) in row.iter().enumerate() {
                    if b as usize >= dim || b as usize == i || row[..t].contains(&b) {
                        return Err(Error::InvalidParameters("links must be distinct indices other than i"));
                    }
                }
            }
        }
        Ok(Self::build(dim, m, k, contribution_seed, links))
    }

    fn build(dim: usize, m: usize, k: usize, contribution_seed: u64, links: Vec<u32>) -> Self {
        let mut readers = vec![Vec::new(); m * dim];
        for i in 0..dim {
            for j in 0..m {
                readers[j * dim + i].push(i as u32);
                for &b in &links[(i * m + j) * k..(i * m + j + 1) * k] {
                    readers[j * dim + b as usize].push(i as u32);
                }
            }
        }
        MonkInstance { dim, m, k, contribution_seed, links, readers }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn contribution_seed(&self) -> u64 {
        self.contribution_seed
    }

    pub fn links(&self) -> &[u32] {
        &self.links
    }

    pub fn neighbours(&self, i: usize, j: usize) -> &[u32] {
        &self.links[(i * self.m + j) * self.k..(i * self.m + j + 1) * self.k]
    }

    /// Contribution of bit `i` under objective `j` for the `K+1`-bit
    /// `pattern` (bit `i` is the most significant bit).
    #[inline]
    pub fn contribution(&self, i: usize, j: usize, pattern: u64) -> f64 {
        unit_f64(hash_words(&[self.contribution_seed, i as u64, j as u64, pattern]))
    }

    #[inline]
    fn pattern(&self, bits: &[bool], i: usize, j: usize) -> u64 {
        let mut p = bits[i] as u64;
        for &b in self.neighbours(i, j) {
            p = (p << 1) | bits[b as usize] as u64;
        }
        p
    }

    /// Native (maximised) objective `j`: mean contribution over all bits.
    pub fn fitness(&self, bits: &[bool], j: usize) -> f64 {
        let total: f64 = (0..self.dim).map(|i| self.contribution(i, j, self.pattern(bits, i, j))).sum();
        total / self.dim as f64
    }

    /// Change of native objective `j` when the bits in `flips` are toggled.
    pub fn flip_delta(&self, bits: &[bool], flips: &[usize], j: usize) -> f64 {
        let mut affected: Vec<u32> = Vec::new();
        for &b in flips {
            affected.extend_from_slice(&self.readers[j * self.dim + b]);
        }
        if flips.len() > 1 {
            affected.sort_unstable();
            affected.dedup();
        }
        let flipped = |b: usize| bits[b] ^ flips.contains(&b);
        let mut delta = 0.0;
        for &i in &affected {
            let i = i as usize;
            let mut after = flipped(i) as u64;
            for &b in self.neighbours(i, j) {
                after = (after << 1) | flipped(b as usize) as u64;
            }
            delta += self.contribution(i, j, after) - self.contribution(i, j, self.pattern(bits, i, j));
        }
        delta / self.dim as f64
    }
}
