use alloc::vec::Vec;

use super::sorting::crowding_of;
use super::{fast_nondominated_sort, random_population, AlgorithmConfig, Evaluator, Observer, RankedPopulation, RunOutcome};
use crate::archive::Individual;
use crate::error::Result;
use crate::objective::ObjectiveVector;
use crate::operators::Variation;
use crate::problems::ProblemInstance;
use crate::seed::stream;

/// Picks `n` survivors from `combined`: whole fronts in order, then the
/// members of the first front that does not fit by descending crowding
/// distance (ties: lower index first). Survivors keep the rank and crowding
/// computed on `combined`.
pub fn environmental_selection(combined: Vec<Individual>, n: usize) -> Result<RankedPopulation> {
    let objs: Vec<ObjectiveVector> = combined.iter().map(|i| i.objectives.clone()).collect();
    let fronts = fast_nondominated_sort(&objs)?;
    let mut chosen: Vec<(usize, usize, f64)> = Vec::with_capacity(n);
    for (r, front) in fronts.iter().enumerate() {
        if chosen.len() >= n {
            break;
        }
        let crowd = crowding_of(&objs, front);
        let mut entries: Vec<(usize, usize, f64)> = front.iter().zip(crowd).map(|(&i, d)| (i, r, d)).collect();
        if chosen.len() + entries.len() > n {
            entries.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
            entries.truncate(n - chosen.len());
        }
        chosen.extend(entries);
    }
    chosen.sort_by_key(|e| e.0);

    let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
    let mut members = Vec::with_capacity(n);
    let mut rank = Vec::with_capacity(n);
    let mut crowding = Vec::with_capacity(n);
    for (i, r, d) in chosen {
        members.push(slots[i].take().expect("each index chosen once"));
        rank.push(r);
        crowding.push(d);
    }
    Ok(RankedPopulation { members, rank, crowding })
}

/// NSGA-II with generational (N + N) replacement. Both children of every
/// crossover are evaluated; the last generation is cut short when the
/// budget runs out.
pub fn run_nsga2<O: Observer>(problem: &ProblemInstance, config: &AlgorithmConfig, observer: O) -> Result<RunOutcome<O>> {
    config.validate()?;
    let n = config.population_size;
    let mut rng = stream(config.seed);
    let variation = Variation::new(problem.family(), problem.dim(), config.operators);
    let mut ev = Evaluator::new(problem, config.budget, observer);

    let mut pop = RankedPopulation::new(random_population(&mut ev, n, &mut rng)?)?;
    while ev.remaining() > 0 {
        let mut offspring: Vec<Individual> = Vec::with_capacity(n);
        while offspring.len() < n && ev.remaining() > 0 {
            let a = pop.tournament(&mut rng);
            let b = pop.tournament(&mut rng);
            let (mut c1, mut c2) = variation.crossover(&pop.members[a].genotype, &pop.members[b].genotype, &mut rng);
            variation.mutate(&mut c1, &mut rng);
            variation.mutate(&mut c2, &mut rng);
            offspring.push(ev.evaluate(c1)?);
            if offspring.len() < n && ev.remaining() > 0 {
                offspring.push(ev.evaluate(c2)?);
            }
        }
        let mut combined = pop.members;
        combined.extend(offspring);
        pop = environmental_selection(combined, n)?;
    }
    Ok(ev.finish())
}
