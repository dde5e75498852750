use alloc::vec::Vec;

use rand::Rng;

use super::{random_population, two_distinct, AlgorithmConfig, Evaluator, Observer, RunOutcome};
use crate::error::{Error, Result};
use crate::objective::ObjectiveVector;
use crate::operators::Variation;
use crate::problems::ProblemInstance;
use crate::seed::stream;

/// `n` evenly spread bi-objective weights `(i/(n-1), 1 - i/(n-1))`.
pub fn uniform_weights(n: usize) -> Vec<[f64; 2]> {
    if n == 1 {
        return alloc::vec![[0.5, 0.5]];
    }
    (0..n)
        .map(|i| {
            let w = i as f64 / (n - 1) as f64;
            [w, 1.0 - w]
        })
        .collect()
}

/// The `t` closest weights (Euclidean) to each weight, itself included,
/// nearest first; ties by index.
pub fn neighbourhoods(weights: &[[f64; 2]], t: usize) -> Vec<Vec<usize>> {
    let t = t.min(weights.len());
    weights
        .iter()
        .map(|w| {
            let mut idx: Vec<usize> = (0..weights.len()).collect();
            let d = |k: usize| {
                let (a, b) = (weights[k][0] - w[0], weights[k][1] - w[1]);
                a * a + b * b
            };
            idx.sort_by(|&a, &b| d(a).total_cmp(&d(b)).then(a.cmp(&b)));
            idx.truncate(t);
            idx
        })
        .collect()
}

/// Weighted Tchebycheff distance `max_k w_k |f_k - z*_k|`.
pub fn tchebycheff(f: &ObjectiveVector, weight: &[f64], ideal: &[f64]) -> f64 {
    f.values()
        .iter()
        .zip(weight)
        .zip(ideal)
        .map(|((fk, wk), zk)| wk * (fk - zk).abs())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// MOEA/D with Tchebycheff decomposition. Each generation visits every
/// subproblem once: two distinct neighbours are recombined, one child is
/// kept and mutated, the ideal point is updated, and the child replaces
/// every neighbour it strictly improves on.
pub fn run_moead<O: Observer>(problem: &ProblemInstance, config: &AlgorithmConfig, observer: O) -> Result<RunOutcome<O>> {
    config.validate()?;
    if problem.m() != 2 {
        return Err(Error::InvalidConfig("MOEA/D weight generation is implemented for two objectives"));
    }
    let n = config.population_size;
    let weights = uniform_weights(n);
    let hood = neighbourhoods(&weights, config.moead_neighbourhood);
    let mut rng = stream(config.seed);
    let variation = Variation::new(problem.family(), problem.dim(), config.operators);
    let mut ev = Evaluator::new(problem, config.budget, observer);

    let mut pop = random_population(&mut ev, n, &mut rng)?;
    let mut ideal = [f64::INFINITY; 2];
    for ind in &pop {
        for k in 0..2 {
            ideal[k] = ideal[k].min(ind.objectives[k]);
        }
    }

    'outer: loop {
        for i in 0..n {
            if ev.remaining() == 0 {
                break 'outer;
            }
            let b = &hood[i];
            let (k, l) = if b.len() >= 2 {
                let (x, y) = two_distinct(b.len(), &mut rng);
                (b[x], b[y])
            } else {
                (b[0], b[0])
            };
            let (c1, c2) = variation.crossover(&pop[k].genotype, &pop[l].genotype, &mut rng);
            let mut child = if rng.gen_bool(0.5) { c1 } else { c2 };
            variation.mutate(&mut child, &mut rng);
            let child = ev.evaluate(child)?;
            for k in 0..2 {
                ideal[k] = ideal[k].min(child.objectives[k]);
            }
            for &j in b {
                if tchebycheff(&child.objectives, &weights[j], &ideal)
                    < tchebycheff(&pop[j].objectives, &weights[j], &ideal)
                {
                    pop[j] = child.clone();
                }
            }
        }
    }
    Ok(ev.finish())
}
