//! Objective vectors and Pareto dominance.
//!
//! Every vector is stored in minimisation orientation. Problems whose native
//! objectives are maximised negate them when evaluating, so one dominance
//! relation serves all families.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Index;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Objective values of one solution, minimisation orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(SmallVec<[f64; 2]>);

impl ObjectiveVector {
    pub fn new(values: impl IntoIterator<Item = f64>) -> Self {
        let values: SmallVec<[f64; 2]> = values.into_iter().collect();
        debug_assert!(values.iter().all(|v| v.is_finite()), "objective values must be finite");
        ObjectiveVector(values)
    }

    pub fn from_slice(values: &[f64]) -> Self {
        Self::new(values.iter().copied())
    }

    /// Number of objectives.
    #[inline]
    pub fn m(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    /// Lexicographic order on the values, used to keep archives sorted.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl Index<usize> for ObjectiveVector {
    type Output = f64;

    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<&[f64]> for ObjectiveVector {
    fn from(values: &[f64]) -> Self {
        Self::from_slice(values)
    }
}

impl<const N: usize> From<[f64; N]> for ObjectiveVector {
    fn from(values: [f64; N]) -> Self {
        Self::new(values)
    }
}

/// `true` iff `a` is no worse than `b` everywhere and differs somewhere.
///
/// Panics if the vectors have different lengths.
#[inline]
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    assert_eq!(a.m(), b.m(), "dominance between vectors of different dimension");
    let mut strictly_better = false;
    for (x, y) in a.values().iter().zip(b.values()) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// `true` iff `a` dominates `b` or both are equal.
#[inline]
pub fn weakly_dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    assert_eq!(a.m(), b.m(), "dominance between vectors of different dimension");
    a.values().iter().zip(b.values()).all(|(x, y)| x <= y)
}

fn check_uniform(set: &[ObjectiveVector]) -> Result<usize> {
    let first = set.first().ok_or(Error::EmptySet)?;
    let m = first.m();
    if let Some(bad) = set.iter().find(|v| v.m() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: bad.m() });
    }
    Ok(m)
}

/// Indices of the vectors not dominated by any other vector of `set`, in
/// their original order. Identical vectors do not dominate each other, so
/// duplicates of a non-dominated vector are all returned.
pub fn non_dominated_filter(set: &[ObjectiveVector]) -> Result<Vec<usize>> {
    let m = check_uniform(set)?;
    if m == 2 {
        Ok(filter_2d(set))
    } else {
        Ok(filter_pairwise(set))
    }
}

fn filter_pairwise(set: &[ObjectiveVector]) -> Vec<usize> {
    (0..set.len())
        .filter(|&i| !set.iter().any(|other| dominates(other, &set[i])))
        .collect()
}

// Sort by (f1, f2) and sweep: a point is dominated iff some earlier point
// that is not identical to it has a second objective no larger.
fn filter_2d(set: &[ObjectiveVector]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| set[a].lex_cmp(&set[b]));

    let mut keep = Vec::with_capacity(set.len());
    let mut best_f2 = f64::INFINITY;
    let mut start = 0;
    while start < order.len() {
        let head = &set[order[start]];
        let mut end = start + 1;
        while end < order.len() && set[order[end]] == *head {
            end += 1;
        }
        if head[1] < best_f2 {
            keep.extend_from_slice(&order[start..end]);
            best_f2 = head[1];
        }
        start = end;
    }
    keep.sort_unstable();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ov(a: f64, b: f64) -> ObjectiveVector {
        ObjectiveVector::from([a, b])
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&ov(1.0, 2.0), &ov(2.0, 2.0)));
        assert!(!dominates(&ov(1.0, 2.0), &ov(1.0, 2.0)));
        assert!(!dominates(&ov(1.0, 3.0), &ov(2.0, 1.0)));
        assert!(!dominates(&ov(2.0, 1.0), &ov(1.0, 3.0)));
        assert!(weakly_dominates(&ov(1.0, 2.0), &ov(1.0, 2.0)));
    }

    #[test]
    #[should_panic]
    fn dominance_dimension_mismatch_panics() {
        dominates(&ov(1.0, 2.0), &ObjectiveVector::from([1.0, 2.0, 3.0]));
    }

    #[test]
    fn filter_examples() {
        let chain = vec![ov(1.0, 3.0), ov(2.0, 2.0), ov(3.0, 1.0)];
        assert_eq!(non_dominated_filter(&chain).unwrap(), vec![0, 1, 2]);
        let pair = vec![ov(1.0, 1.0), ov(2.0, 2.0)];
        assert_eq!(non_dominated_filter(&pair).unwrap(), vec![0]);
        assert_eq!(non_dominated_filter(&[]), Err(Error::EmptySet));
    }

    #[test]
    fn filter_keeps_duplicates_and_drops_same_f1_worse_f2() {
        let set = vec![ov(1.0, 2.0), ov(1.0, 2.0), ov(1.0, 3.0), ov(0.0, 5.0)];
        assert_eq!(non_dominated_filter(&set).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn filter_rejects_mixed_dimensions() {
        let set = vec![ov(1.0, 2.0), ObjectiveVector::from([1.0, 2.0, 3.0])];
        assert!(matches!(non_dominated_filter(&set), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn filter_matches_pairwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [2usize, 3] {
            for _ in 0..50 {
                let set: Vec<ObjectiveVector> = (0..200)
                    .map(|_| ObjectiveVector::new((0..m).map(|_| rng.gen_range(0..20) as f64)))
                    .collect();
                let oracle: Vec<usize> = (0..set.len())
                    .filter(|&i| {
                        !(0..set.len()).any(|j| {
                            let (a, b) = (set[j].values(), set[i].values());
                            a.iter().zip(b).all(|(x, y)| x <= y) && a != b
                        })
                    })
                    .collect();
                assert_eq!(non_dominated_filter(&set).unwrap(), oracle);
            }
        }
    }
}
