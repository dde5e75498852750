use alloc::vec;
use alloc::vec::Vec;

use crate::archive::Individual;
use crate::error::{Error, Result};
use crate::objective::{dominates, ObjectiveVector};

/// Partitions `pop` into non-domination fronts. Front 0 is the
/// non-dominated subset, front `k` the non-dominated subset of what remains
/// after removing fronts `< k`. Indices inside a front are ascending.
pub fn fast_nondominated_sort(pop: &[ObjectiveVector]) -> Result<Vec<Vec<usize>>> {
    let first = pop.first().ok_or(Error::EmptySet)?;
    let m = first.m();
    if let Some(bad) = pop.iter().find(|z| z.m() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: bad.m() });
    }
    let mut fronts = if m == 2 { sort_2d(pop) } else { sort_general(pop) };
    for f in &mut fronts {
        f.sort_unstable();
    }
    Ok(fronts)
}

// Deb's bookkeeping: domination counts and dominated sets.
fn sort_general(pop: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for p in 0..n {
        for q in (p + 1)..n {
            if dominates(&pop[p], &pop[q]) {
                dominated_by_me[p].push(q);
                count[q] += 1;
            } else if dominates(&pop[q], &pop[p]) {
                dominated_by_me[q].push(p);
                count[p] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by_me[p] {
                count[q] -= 1;
                if count[q] == 0 {
                    next.push(q);
                }
            }
        }
        fronts.push(current);
        current = next;
    }
    fronts
}

// Two objectives: visit points in lexicographic order; each front's most
// recent member has the smallest second objective in that front, and those
// values are non-decreasing across fronts, so the target front is found by
// binary search.
fn sort_2d(pop: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| pop[a].lex_cmp(&pop[b]));
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut tails: Vec<usize> = Vec::new();
    for i in order {
        let p = &pop[i];
        let t = tails.partition_point(|&q| pop[q][1] <= p[1]);
        let k = if t > 0 && pop[tails[t - 1]] == *p { t - 1 } else { t };
        if k == fronts.len() {
            fronts.push(Vec::new());
            tails.push(i);
        }
        fronts[k].push(i);
        tails[k] = i;
    }
    fronts
}

/// NSGA-II crowding distance of every point of `front`, in input order.
/// Boundary points of each objective get `+inf`; an objective with zero
/// spread adds nothing to interior points.
pub fn crowding_distance(front: &[ObjectiveVector]) -> Vec<f64> {
    let idx: Vec<usize> = (0..front.len()).collect();
    crowding_of(front, &idx)
}

pub(crate) fn crowding_of(points: &[ObjectiveVector], idx: &[usize]) -> Vec<f64> {
    let n = idx.len();
    let mut dist = vec![0.0; n];
    if n == 0 {
        return dist;
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = points[idx[0]].m();
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..m {
        order.sort_by(|&a, &b| points[idx[a]][obj].total_cmp(&points[idx[b]][obj]).then(a.cmp(&b)));
        let lo = points[idx[order[0]]][obj];
        let hi = points[idx[order[n - 1]]][obj];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..n - 1 {
                let gap = points[idx[order[w + 1]]][obj] - points[idx[order[w - 1]]][obj];
                dist[order[w]] += gap / (hi - lo);
            }
        }
    }
    dist
}

/// A population with its front index and crowding distance per member.
#[derive(Debug, Clone)]
pub struct RankedPopulation {
    pub members: Vec<Individual>,
    pub rank: Vec<usize>,
    pub crowding: Vec<f64>,
}

impl RankedPopulation {
    pub fn new(members: Vec<Individual>) -> Result<Self> {
        let objs: Vec<ObjectiveVector> = members.iter().map(|i| i.objectives.clone()).collect();
        let fronts = fast_nondominated_sort(&objs)?;
        let mut rank = vec![0; members.len()];
        let mut crowding = vec![0.0; members.len()];
        for (r, front) in fronts.iter().enumerate() {
            for (&i, d) in front.iter().zip(crowding_of(&objs, front)) {
                rank[i] = r;
                crowding[i] = d;
            }
        }
        Ok(RankedPopulation { members, rank, crowding })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `true` if member `a` beats `b` on (lower rank, larger crowding);
    /// `None` on a tie.
    pub fn better(&self, a: usize, b: usize) -> Option<bool> {
        if self.rank[a] != self.rank[b] {
            return Some(self.rank[a] < self.rank[b]);
        }
        if self.crowding[a] != self.crowding[b] {
            return Some(self.crowding[a] > self.crowding[b]);
        }
        None
    }

    /// Binary tournament; ties are broken uniformly.
    pub fn tournament<R: rand::Rng>(&self, rng: &mut R) -> usize {
        let a = rng.gen_range(0..self.len());
        let b = rng.gen_range(0..self.len());
        match self.better(a, b) {
            Some(true) => a,
            Some(false) => b,
            None => {
                if rng.gen_bool(0.5) {
                    a
                } else {
                    b
                }
            }
        }
    }
}
