use alloc::vec::Vec;

use rand::Rng;

use super::{fast_nondominated_sort, random_population, AlgorithmConfig, Evaluator, Observer, ParentSelection, RankedPopulation, RunOutcome};
use crate::error::Result;
use crate::indicators::hv_contributions;
use crate::objective::ObjectiveVector;
use crate::operators::Variation;
use crate::problems::ProblemInstance;
use crate::seed::stream;

/// Index (into `pop`) of the member SMS-EMOA discards: the only member of
/// the worst front, or the worst-front member with the smallest exclusive
/// hypervolume. The reference point is the worst front's componentwise
/// maximum plus one. Ties go to the lower index.
pub fn smsemoa_removal(pop: &[ObjectiveVector]) -> Result<usize> {
    let fronts = fast_nondominated_sort(pop)?;
    let last = fronts.last().expect("non-empty population has a front");
    if last.len() == 1 {
        return Ok(last[0]);
    }
    let front: Vec<ObjectiveVector> = last.iter().map(|&i| pop[i].clone()).collect();
    let m = front[0].m();
    let reference = ObjectiveVector::new(
        (0..m).map(|j| front.iter().map(|z| z[j]).fold(f64::NEG_INFINITY, f64::max) + 1.0),
    );
    let contrib = hv_contributions(&front, &reference)?;
    let mut worst = 0;
    for k in 1..contrib.len() {
        if contrib[k] < contrib[worst] {
            worst = k;
        }
    }
    Ok(last[worst])
}

/// Steady-state SMS-EMOA: one offspring per iteration, then the (N + 1)
/// population drops one member via [`smsemoa_removal`].
pub fn run_smsemoa<O: Observer>(problem: &ProblemInstance, config: &AlgorithmConfig, observer: O) -> Result<RunOutcome<O>> {
    config.validate()?;
    let n = config.population_size;
    let mut rng = stream(config.seed);
    let variation = Variation::new(problem.family(), problem.dim(), config.operators);
    let mut ev = Evaluator::new(problem, config.budget, observer);

    let mut pop = random_population(&mut ev, n, &mut rng)?;
    while ev.remaining() > 0 {
        let (a, b) = match config.smsemoa_parent_selection {
            ParentSelection::Tournament => {
                let ranked = RankedPopulation::new(pop)?;
                let pick = (ranked.tournament(&mut rng), ranked.tournament(&mut rng));
                pop = ranked.members;
                pick
            }
            ParentSelection::Random => (rng.gen_range(0..n), rng.gen_range(0..n)),
        };
        let (c1, c2) = variation.crossover(&pop[a].genotype, &pop[b].genotype, &mut rng);
        let mut child = if rng.gen_bool(0.5) { c1 } else { c2 };
        variation.mutate(&mut child, &mut rng);
        pop.push(ev.evaluate(child)?);

        let objs: Vec<ObjectiveVector> = pop.iter().map(|i| i.objectives.clone()).collect();
        let drop = smsemoa_removal(&objs)?;
        pop.swap_remove(drop);
        debug_assert_eq!(pop.len(), config.population_size);
    }
    Ok(ev.finish())
}
