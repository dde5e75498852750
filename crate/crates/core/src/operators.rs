//! Variation operators for bit strings and permutations.
//!
//! OX and CX follow the textbook definitions: OX copies one parent's segment
//! and fills the rest with the other parent's cities in cyclic order starting
//! after the segment; CX splits positions into the cycles of the `a -> b`
//! mapping and alternates which parent each cycle is copied from.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::genotype::Genotype;
use crate::problems::{Family, Move};

/// How the permutation mutation rate is read inside the GAs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermutationMutationSemantics {
    /// With probability `rate`, apply exactly one move to the offspring.
    #[default]
    PerOffspring,
    /// Apply `Binomial(D, rate)` moves to the offspring.
    PerGene,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorConfig {
    pub crossover_rate: f64,
    /// Bit-flip probability per gene; `None` means `1/D`.
    pub bit_mutation_rate: Option<f64>,
    pub permutation_mutation_rate: f64,
    pub permutation_mutation_semantics: PermutationMutationSemantics,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        OperatorConfig {
            crossover_rate: 1.0,
            bit_mutation_rate: None,
            permutation_mutation_rate: 0.05,
            permutation_mutation_semantics: PermutationMutationSemantics::PerOffspring,
        }
    }
}

impl OperatorConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |p: f64| (0.0..=1.0).contains(&p);
        if !ok(self.crossover_rate)
            || !ok(self.permutation_mutation_rate)
            || !self.bit_mutation_rate.map_or(true, ok)
        {
            return Err(Error::InvalidConfig("operator rates must lie in [0, 1]"));
        }
        Ok(())
    }
}

fn same_len<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(())
}

/// Each position is exchanged between the children with probability 1/2.
pub fn uniform_crossover<R: Rng + ?Sized>(a: &[bool], b: &[bool], rng: &mut R) -> Result<(Vec<bool>, Vec<bool>)> {
    same_len(a, b)?;
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    for (chunk, start) in (0..a.len()).step_by(64).map(|s| (rng.next_u64(), s)) {
        for i in start..(start + 64).min(a.len()) {
            if (chunk >> (i - start)) & 1 == 1 {
                c1[i] = b[i];
                c2[i] = a[i];
            }
        }
    }
    Ok((c1, c2))
}

/// Flips every bit independently with probability `p`.
pub fn bitflip_mutation<R: Rng + ?Sized>(g: &mut [bool], p: f64, rng: &mut R) {
    if p <= 0.0 || g.is_empty() {
        return;
    }
    if p >= 1.0 {
        g.iter_mut().for_each(|b| *b = !*b);
        return;
    }
    // Jump straight to the next flipped position: gaps are geometric.
    let log_q = libm::log1p(-p);
    let mut pos = 0usize;
    loop {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let gap = libm::floor(libm::log(u) / log_q);
        if gap >= (g.len() - pos) as f64 {
            return;
        }
        pos += gap as usize;
        g[pos] = !g[pos];
        pos += 1;
        if pos >= g.len() {
            return;
        }
    }
}

/// A flip of `k` distinct, uniformly chosen positions.
pub fn sample_k_bit_flip<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> Move {
    assert!(k <= dim, "cannot flip more bits than the string holds");
    let mut picked: SmallVec<[usize; 2]> = SmallVec::with_capacity(k);
    while picked.len() < k {
        let i = rng.gen_range(0..dim);
        if !picked.contains(&i) {
            picked.push(i);
        }
    }
    Move::Flip(picked)
}

pub fn k_bit_flip<R: Rng + ?Sized>(g: &mut [bool], k: usize, rng: &mut R) {
    if let Move::Flip(bits) = sample_k_bit_flip(g.len(), k, rng) {
        for b in bits {
            g[b] = !g[b];
        }
    }
}

/// OX with an explicit segment `[lo, hi]`.
pub fn order_crossover_with_segment(a: &[usize], b: &[usize], lo: usize, hi: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    same_len(a, b)?;
    assert!(lo <= hi && hi < a.len(), "segment out of range");
    Ok((ox_child(a, b, lo, hi), ox_child(b, a, lo, hi)))
}

fn ox_child(keep: &[usize], fill: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let d = keep.len();
    let mut child = vec![usize::MAX; d];
    let mut used = vec![false; d];
    for i in lo..=hi {
        child[i] = keep[i];
        used[keep[i]] = true;
    }
    let mut slot = (hi + 1) % d;
    for t in 0..d {
        let city = fill[(hi + 1 + t) % d];
        if used[city] {
            continue;
        }
        child[slot] = city;
        used[city] = true;
        slot = (slot + 1) % d;
    }
    child
}

/// OX with a uniformly random segment.
pub fn order_crossover<R: Rng + ?Sized>(a: &[usize], b: &[usize], rng: &mut R) -> Result<(Vec<usize>, Vec<usize>)> {
    same_len(a, b)?;
    let (x, y) = (rng.gen_range(0..a.len()), rng.gen_range(0..a.len()));
    order_crossover_with_segment(a, b, x.min(y), x.max(y))
}

/// CX: the first cycle comes from `a` for child 1, the second from `b`, and so on.
pub fn cycle_crossover(a: &[usize], b: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    same_len(a, b)?;
    let d = a.len();
    let mut pos_in_a = vec![0usize; d];
    for (i, &v) in a.iter().enumerate() {
        pos_in_a[v] = i;
    }
    let mut c1 = vec![0usize; d];
    let mut c2 = vec![0usize; d];
    let mut assigned = vec![false; d];
    let mut cycle = 0usize;
    for start in 0..d {
        if assigned[start] {
            continue;
        }
        let mut p = start;
        while !assigned[p] {
            assigned[p] = true;
            if cycle % 2 == 0 {
                c1[p] = a[p];
                c2[p] = b[p];
            } else {
                c1[p] = b[p];
                c2[p] = a[p];
            }
            p = pos_in_a[b[p]];
        }
        cycle += 1;
    }
    Ok((c1, c2))
}

/// Uniform pair of cut points `i < j`; the move reverses `[i..=j]`.
pub fn sample_two_opt<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Move {
    assert!(dim >= 2, "2-opt needs at least two positions");
    let i = rng.gen_range(0..dim);
    let mut j = rng.gen_range(0..dim - 1);
    if j >= i {
        j += 1;
    }
    Move::TwoOpt { i: i.min(j), j: i.max(j) }
}

/// Two distinct uniform positions to exchange.
pub fn sample_two_swap<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Move {
    assert!(dim >= 2, "2-swap needs at least two positions");
    let i = rng.gen_range(0..dim);
    let mut j = rng.gen_range(0..dim - 1);
    if j >= i {
        j += 1;
    }
    Move::Swap { i, j }
}

pub fn two_opt_mutation<R: Rng + ?Sized>(g: &mut Vec<usize>, rng: &mut R) {
    if let Move::TwoOpt { i, j } = sample_two_opt(g.len(), rng) {
        g[i..=j].reverse();
    }
}

pub fn two_swap_mutation<R: Rng + ?Sized>(g: &mut [usize], rng: &mut R) {
    if let Move::Swap { i, j } = sample_two_swap(g.len(), rng) {
        g.swap(i, j);
    }
}

/// The family-specific operator set shared by all optimisers.
#[derive(Debug, Clone, Copy)]
pub struct Variation {
    family: Family,
    dim: usize,
    config: OperatorConfig,
}

impl Variation {
    pub fn new(family: Family, dim: usize, config: OperatorConfig) -> Self {
        Variation { family, dim, config }
    }

    pub fn config(&self) -> &OperatorConfig {
        &self.config
    }

    /// Uniform crossover for bit strings, OX for tours, CX for assignments.
    /// Children are copies of the parents when crossover is skipped.
    pub fn crossover<R: Rng + ?Sized>(&self, a: &Genotype, b: &Genotype, rng: &mut R) -> (Genotype, Genotype) {
        let rate = self.config.crossover_rate;
        if rate < 1.0 && !rng.gen_bool(rate) {
            return (a.clone(), b.clone());
        }
        match (self.family, a, b) {
            (Family::Mokp | Family::Monk, Genotype::BitString(x), Genotype::BitString(y)) => {
                let (c1, c2) = uniform_crossover(x, y, rng).expect("parents of equal length");
                (Genotype::BitString(c1), Genotype::BitString(c2))
            }
            (Family::Motsp, Genotype::Permutation(x), Genotype::Permutation(y)) => {
                let (c1, c2) = order_crossover(x, y, rng).expect("parents of equal length");
                (Genotype::Permutation(c1), Genotype::Permutation(c2))
            }
            (Family::Moqap, Genotype::Permutation(x), Genotype::Permutation(y)) => {
                let (c1, c2) = cycle_crossover(x, y).expect("parents of equal length");
                (Genotype::Permutation(c1), Genotype::Permutation(c2))
            }
            _ => panic!("parents do not match the problem encoding"),
        }
    }

    /// The GA mutation: bit-flip for bit strings, 2-opt or 2-swap moves for
    /// permutations at the configured rate.
    pub fn mutate<R: Rng + ?Sized>(&self, g: &mut Genotype, rng: &mut R) {
        match g {
            Genotype::BitString(bits) => {
                let p = self.config.bit_mutation_rate.unwrap_or(1.0 / self.dim as f64);
                bitflip_mutation(bits, p, rng);
            }
            Genotype::Permutation(_) => {
                let rate = self.config.permutation_mutation_rate;
                let moves = match self.config.permutation_mutation_semantics {
                    PermutationMutationSemantics::PerOffspring => (rate > 0.0 && rng.gen_bool(rate)) as usize,
                    PermutationMutationSemantics::PerGene => (0..self.dim).filter(|_| rng.gen_bool(rate)).count(),
                };
                for _ in 0..moves {
                    self.local_move(rng).apply(g);
                }
            }
        }
    }

    /// The single local move SEMO applies: a two-bit flip on the knapsack,
    /// a one-bit flip on the NK landscape, 2-opt on tours, 2-swap on
    /// assignments.
    pub fn local_move<R: Rng + ?Sized>(&self, rng: &mut R) -> Move {
        match self.family {
            Family::Mokp => sample_k_bit_flip(self.dim, 2.min(self.dim), rng),
            Family::Monk => sample_k_bit_flip(self.dim, 1, rng),
            Family::Motsp => sample_two_opt(self.dim, rng),
            Family::Moqap => sample_two_swap(self.dim, rng),
        }
    }
}

#[cfg(test)]
mod tests;
