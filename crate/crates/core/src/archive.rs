//! Unbounded archive of mutually non-dominated solutions.
//!
//! Members are kept sorted lexicographically by objective vector. With two
//! objectives this makes the second objective strictly decreasing along the
//! list, so a candidate only has to be compared with its sorted neighbourhood:
//! insertion costs `O(log n + r)` comparisons, `r` being the number of members
//! it evicts (plus the memmove of the backing vector).

use alloc::vec::Vec;

use crate::genotype::Genotype;
use crate::objective::{dominates, weakly_dominates, ObjectiveVector};

/// A genotype together with its evaluated objective vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genotype: Genotype,
    pub objectives: ObjectiveVector,
}

impl Individual {
    pub fn new(genotype: Genotype, objectives: ObjectiveVector) -> Self {
        Individual { genotype, objectives }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The candidate entered the archive and evicted `removed` members.
    Accepted { removed: usize },
    /// A member dominates the candidate or has the same objective vector.
    Rejected,
}

impl InsertOutcome {
    pub fn is_accepted(self) -> bool {
        matches!(self, InsertOutcome::Accepted { .. })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Archive {
    members: Vec<Individual>,
    m: Option<usize>,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of objectives, fixed by the first insertion.
    pub fn m(&self) -> Option<usize> {
        self.m
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn get(&self, i: usize) -> &Individual {
        &self.members[i]
    }

    pub fn objectives(&self) -> impl ExactSizeIterator<Item = &ObjectiveVector> + '_ {
        self.members.iter().map(|ind| &ind.objectives)
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    /// Offers `candidate` to the archive.
    ///
    /// Panics if its dimension differs from the archive's.
    pub fn insert(&mut self, candidate: Individual) -> InsertOutcome {
        let m = *self.m.get_or_insert(candidate.objectives.m());
        assert_eq!(candidate.objectives.m(), m, "candidate dimension differs from archive");
        if m == 2 {
            self.insert_2d(candidate)
        } else {
            self.insert_linear(candidate)
        }
    }

    /// `true` if some member dominates `z` or equals it.
    pub fn covers(&self, z: &ObjectiveVector) -> bool {
        if self.m == Some(2) {
            let p = self.members.partition_point(|a| a.objectives[0] <= z[0]);
            p > 0 && self.members[p - 1].objectives[1] <= z[1]
        } else {
            self.members.iter().any(|a| weakly_dominates(&a.objectives, z))
        }
    }

    fn insert_2d(&mut self, candidate: Individual) -> InsertOutcome {
        let z = &candidate.objectives;
        // Members with f1 <= z1 form a prefix; the last of them has the
        // smallest f2 among that prefix.
        let upto = self.members.partition_point(|a| a.objectives[0] <= z[0]);
        if upto > 0 && self.members[upto - 1].objectives[1] <= z[1] {
            return InsertOutcome::Rejected;
        }
        // Dominated members have f1 >= z1 and f2 >= z2; they are contiguous
        // from the first member with f1 >= z1.
        let from = self.members.partition_point(|a| a.objectives[0] < z[0]);
        let mut to = from;
        while to < self.members.len() && self.members[to].objectives[1] >= z[1] {
            to += 1;
        }
        let removed = to - from;
        self.members.splice(from..to, core::iter::once(candidate));
        InsertOutcome::Accepted { removed }
    }

    fn insert_linear(&mut self, candidate: Individual) -> InsertOutcome {
        let z = &candidate.objectives;
        if self.members.iter().any(|a| weakly_dominates(&a.objectives, z)) {
            return InsertOutcome::Rejected;
        }
        let before = self.members.len();
        self.members.retain(|a| !dominates(z, &a.objectives));
        let removed = before - self.members.len();
        let pos = self.members.partition_point(|a| a.objectives.lex_cmp(z).is_lt());
        self.members.insert(pos, candidate);
        InsertOutcome::Accepted { removed }
    }
}
