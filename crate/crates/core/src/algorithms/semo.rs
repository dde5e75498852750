use rand::Rng;

use super::{two_distinct, AlgorithmConfig, Evaluator, Observer, RunOutcome};
use crate::error::Result;
use crate::operators::Variation;
use crate::problems::ProblemInstance;
use crate::seed::stream;

/// SEMO: start from one random solution; repeatedly mutate a uniformly
/// chosen archive member with one local move and offer the result to the
/// archive.
pub fn run_semo<O: Observer>(problem: &ProblemInstance, config: &AlgorithmConfig, observer: O) -> Result<RunOutcome<O>> {
    run_semo_variant(problem, config, observer, false)
}

/// SEMOx: as SEMO, but once the archive holds at least two solutions, two
/// distinct members are recombined and one child (chosen at random) is
/// mutated.
pub fn run_semox<O: Observer>(problem: &ProblemInstance, config: &AlgorithmConfig, observer: O) -> Result<RunOutcome<O>> {
    run_semo_variant(problem, config, observer, true)
}

fn run_semo_variant<O: Observer>(
    problem: &ProblemInstance,
    config: &AlgorithmConfig,
    observer: O,
    with_crossover: bool,
) -> Result<RunOutcome<O>> {
    config.validate()?;
    let mut rng = stream(config.seed);
    let variation = Variation::new(problem.family(), problem.dim(), config.operators);
    let mut ev = Evaluator::new(problem, config.budget, observer);

    let start = problem.random_genotype(&mut rng);
    ev.evaluate(start)?;

    while ev.remaining() > 0 {
        let size = ev.archive().len();
        if with_crossover && size >= 2 {
            let (a, b) = two_distinct(size, &mut rng);
            let (c1, c2) = variation.crossover(&ev.archive().get(a).genotype, &ev.archive().get(b).genotype, &mut rng);
            let mut child = if rng.gen_bool(0.5) { c1 } else { c2 };
            variation.local_move(&mut rng).apply(&mut child);
            ev.notify_semo_step(size, true);
            ev.evaluate(child)?;
        } else {
            let parent = ev.archive().get(rng.gen_range(0..size)).clone();
            let mv = variation.local_move(&mut rng);
            ev.notify_semo_step(size, false);
            ev.evaluate_move(&parent, &mv)?;
        }
    }
    Ok(ev.finish())
}
