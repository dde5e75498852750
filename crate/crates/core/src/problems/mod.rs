//! The four benchmark families, their seeded generators and evaluators.

mod mokp;
mod monk;
mod moqap;
mod motsp;

pub use mokp::MokpInstance;
pub use monk::{MonkInstance, DEFAULT_K};
pub use moqap::{MoqapInstance, MAX_FLOW, PLANE_SIZE};
pub use motsp::MotspInstance;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use smallvec::SmallVec;

use crate::archive::Individual;
use crate::error::{Error, Result};
use crate::genotype::{is_permutation, Encoding, Genotype};
use crate::objective::ObjectiveVector;
use crate::seed::stream;

/// Version tag of the instance generators; bump when generated data changes.
pub const GENERATOR_VERSION: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Motsp,
    Mokp,
    Monk,
    Moqap,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Motsp, Family::Mokp, Family::Monk, Family::Moqap];

    pub fn name(self) -> &'static str {
        match self {
            Family::Motsp => "motsp",
            Family::Mokp => "mokp",
            Family::Monk => "monk",
            Family::Moqap => "moqap",
        }
    }

    pub fn encoding(self) -> Encoding {
        match self {
            Family::Mokp | Family::Monk => Encoding::BitString,
            Family::Motsp | Family::Moqap => Encoding::Permutation,
        }
    }

    /// Whether the native objectives are maximised (and therefore negated
    /// inside the library).
    pub fn maximises(self) -> bool {
        matches!(self, Family::Mokp | Family::Monk)
    }

    fn stream_id(self) -> u64 {
        match self {
            Family::Motsp => 1,
            Family::Mokp => 2,
            Family::Monk => 3,
            Family::Moqap => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameters("unknown problem family"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceData {
    Motsp(MotspInstance),
    Mokp(MokpInstance),
    Monk(MonkInstance),
    Moqap(MoqapInstance),
}

/// A generated problem together with the arguments that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    family: Family,
    dim: usize,
    m: usize,
    seed: u64,
    data: InstanceData,
}

/// Generates a deterministic instance of `family` from `seed`.
pub fn generate_instance(family: Family, dim: usize, m: usize, seed: u64) -> Result<ProblemInstance> {
    if dim < 2 {
        return Err(Error::InvalidParameters("D must be at least 2"));
    }
    if m < 2 {
        return Err(Error::InvalidParameters("m must be at least 2"));
    }
    let mut rng = stream(seed);
    rng.set_stream(family.stream_id());
    let data = match family {
        Family::Motsp => InstanceData::Motsp(MotspInstance::generate(dim, m, &mut rng)),
        Family::Mokp => InstanceData::Mokp(MokpInstance::generate(dim, m, &mut rng)),
        Family::Monk => InstanceData::Monk(MonkInstance::generate(dim, m, DEFAULT_K, &mut rng)?),
        Family::Moqap => InstanceData::Moqap(MoqapInstance::generate(dim, m, &mut rng)),
    };
    Ok(ProblemInstance { family, dim, m, seed, data })
}

/// A local move whose effect on the objectives can be computed without a
/// full re-evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Reverse `order[i..=j]`.
    TwoOpt { i: usize, j: usize },
    /// Exchange `order[i]` and `order[j]`.
    Swap { i: usize, j: usize },
    /// Toggle the listed bits.
    Flip(SmallVec<[usize; 2]>),
}

impl Move {
    pub fn apply(&self, g: &mut Genotype) {
        match (self, g) {
            (Move::TwoOpt { i, j }, Genotype::Permutation(order)) => {
                if i < j {
                    order[*i..=*j].reverse();
                }
            }
            (Move::Swap { i, j }, Genotype::Permutation(order)) => order.swap(*i, *j),
            (Move::Flip(bits), Genotype::BitString(g)) => {
                for &b in bits {
                    g[b] = !g[b];
                }
            }
            _ => panic!("move does not match the genotype encoding"),
        }
    }
}

impl ProblemInstance {
    /// Wraps explicitly supplied instance data, e.g. data read back from a file.
    pub fn from_data(seed: u64, data: InstanceData) -> Self {
        let (family, dim, m) = match &data {
            InstanceData::Motsp(p) => (Family::Motsp, p.dim(), p.m()),
            InstanceData::Mokp(p) => (Family::Mokp, p.dim(), p.m()),
            InstanceData::Monk(p) => (Family::Monk, p.dim(), p.m()),
            InstanceData::Moqap(p) => (Family::Moqap, p.dim(), p.m()),
        };
        ProblemInstance { family, dim, m, seed, data }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn data(&self) -> &InstanceData {
        &self.data
    }

    pub fn encoding(&self) -> Encoding {
        self.family.encoding()
    }

    fn check(&self, g: &Genotype) -> Result<()> {
        if g.encoding() != self.encoding() || g.len() != self.dim {
            return Err(Error::EncodingMismatch);
        }
        Ok(())
    }

    /// Objective vector of `g` in minimisation orientation.
    pub fn evaluate(&self, g: &Genotype) -> Result<ObjectiveVector> {
        self.check(g)?;
        let m = self.m;
        Ok(match (&self.data, g) {
            (InstanceData::Motsp(p), Genotype::Permutation(tour)) => {
                ObjectiveVector::new((0..m).map(|j| p.tour_cost(tour, j)))
            }
            (InstanceData::Moqap(p), Genotype::Permutation(pi)) => {
                ObjectiveVector::new((0..m).map(|j| p.cost(pi, j)))
            }
            (InstanceData::Mokp(p), Genotype::BitString(bits)) => {
                if !p.is_feasible(bits) {
                    return Err(Error::Infeasible);
                }
                ObjectiveVector::new(p.profits(bits).into_iter().map(|v| -v))
            }
            (InstanceData::Monk(p), Genotype::BitString(bits)) => {
                ObjectiveVector::new((0..m).map(|j| -p.fitness(bits, j)))
            }
            _ => return Err(Error::EncodingMismatch),
        })
    }

    /// Objectives of `parent` after applying `mv`, computed incrementally.
    ///
    /// Supported: 2-opt on the TSP (`O(segment)` per objective), swaps on the
    /// QAP (`O(D)`), and bit flips on the NK landscape (`O(K^2)`).
    pub fn delta_evaluate(&self, parent: &Individual, mv: &Move) -> Result<ObjectiveVector> {
        self.check(&parent.genotype)?;
        let z = &parent.objectives;
        match (&self.data, &parent.genotype, mv) {
            (InstanceData::Motsp(p), Genotype::Permutation(tour), Move::TwoOpt { i, j }) => {
                if *i > *j || *j >= self.dim {
                    return Err(Error::UnsupportedMove);
                }
                Ok(ObjectiveVector::new((0..self.m).map(|o| z[o] + p.reversal_delta(tour, *i, *j, o))))
            }
            (InstanceData::Moqap(p), Genotype::Permutation(pi), Move::Swap { i, j }) => {
                if *i >= self.dim || *j >= self.dim {
                    return Err(Error::UnsupportedMove);
                }
                Ok(ObjectiveVector::new((0..self.m).map(|o| z[o] + p.swap_delta(pi, *i, *j, o))))
            }
            (InstanceData::Monk(p), Genotype::BitString(bits), Move::Flip(flips)) => {
                if flips.iter().any(|&b| b >= self.dim) {
                    return Err(Error::UnsupportedMove);
                }
                Ok(ObjectiveVector::new((0..self.m).map(|o| z[o] - p.flip_delta(bits, flips, o))))
            }
            _ => Err(Error::UnsupportedMove),
        }
    }

    /// Whether [`delta_evaluate`](Self::delta_evaluate) handles moves of this kind.
    pub fn supports_delta(&self, mv: &Move) -> bool {
        matches!(
            (&self.data, mv),
            (InstanceData::Motsp(_), Move::TwoOpt { .. })
                | (InstanceData::Moqap(_), Move::Swap { .. })
                | (InstanceData::Monk(_), Move::Flip(_))
        )
    }

    /// Makes a genotype admissible before evaluation: knapsack solutions are
    /// repaired, everything else passes through.
    pub fn prepare(&self, mut g: Genotype) -> Genotype {
        if let (InstanceData::Mokp(p), Genotype::BitString(bits)) = (&self.data, &mut g) {
            p.repair(bits);
        }
        g
    }

    /// Uniformly random genotype, already prepared.
    pub fn random_genotype<R: Rng + ?Sized>(&self, rng: &mut R) -> Genotype {
        let g = match self.encoding() {
            Encoding::BitString => Genotype::BitString(random_bits(self.dim, rng)),
            Encoding::Permutation => {
                let mut order: Vec<usize> = (0..self.dim).collect();
                order.shuffle(rng);
                Genotype::Permutation(order)
            }
        };
        self.prepare(g)
    }

    /// Converts a canonical vector back to the problem's native orientation.
    pub fn to_native(&self, z: &ObjectiveVector) -> Vec<f64> {
        to_native(self.family, z.values())
    }

    /// Validates that `g` is a well-formed genotype for this instance.
    pub fn validate(&self, g: &Genotype) -> Result<()> {
        self.check(g)?;
        if let Genotype::Permutation(order) = g {
            if !is_permutation(order) {
                return Err(Error::InvalidPermutation);
            }
        }
        Ok(())
    }
}

/// Native orientation of canonical values for `family`.
pub fn to_native(family: Family, values: &[f64]) -> Vec<f64> {
    if family.maximises() {
        values.iter().map(|v| -v).collect()
    } else {
        values.to_vec()
    }
}

/// Canonical (minimisation) orientation of native values for `family`.
pub fn from_native(family: Family, values: &[f64]) -> ObjectiveVector {
    ObjectiveVector::from_slice(&to_native(family, values))
}

pub(crate) fn random_bits<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<bool> {
    let mut bits = Vec::with_capacity(dim);
    while bits.len() < dim {
        let word = rng.next_u64();
        let take = (dim - bits.len()).min(64);
        bits.extend((0..take).map(|b| (word >> b) & 1 == 1));
    }
    bits
}
