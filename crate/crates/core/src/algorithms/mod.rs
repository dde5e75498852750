//! The five optimisers. Each consumes an exact evaluation budget and routes
//! every evaluated individual through an [`Evaluator`], which keeps the
//! external non-dominated archive and notifies an [`Observer`].

mod moead;
mod nsga2;
mod semo;
mod smsemoa;
mod sorting;

pub use moead::{neighbourhoods, run_moead, tchebycheff, uniform_weights};
pub use nsga2::{environmental_selection, run_nsga2};
pub use semo::{run_semo, run_semox};
pub use smsemoa::{run_smsemoa, smsemoa_removal};
pub use sorting::{crowding_distance, fast_nondominated_sort, RankedPopulation};

use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::archive::{Archive, Individual, InsertOutcome};
use crate::error::{Error, Result};
use crate::genotype::Genotype;
use crate::operators::OperatorConfig;
use crate::problems::{Move, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmKind {
    Semo,
    Semox,
    Nsga2,
    SmsEmoa,
    Moead,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] =
        [AlgorithmKind::Semo, AlgorithmKind::Semox, AlgorithmKind::Nsga2, AlgorithmKind::SmsEmoa, AlgorithmKind::Moead];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Semo => "SEMO",
            AlgorithmKind::Semox => "SEMOx",
            AlgorithmKind::Nsga2 => "NSGA-II",
            AlgorithmKind::SmsEmoa => "SMS-EMOA",
            AlgorithmKind::Moead => "MOEA/D",
        }
    }

    /// Whether the algorithm keeps a fixed-size population.
    pub fn uses_population(self) -> bool {
        !matches!(self, AlgorithmKind::Semo | AlgorithmKind::Semox)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: alloc::string::String =
            s.chars().filter(|c| c.is_ascii_alphanumeric()).map(|c| c.to_ascii_lowercase()).collect();
        match key.as_str() {
            "semo" => Ok(AlgorithmKind::Semo),
            "semox" => Ok(AlgorithmKind::Semox),
            "nsga2" | "nsgaii" => Ok(AlgorithmKind::Nsga2),
            "smsemoa" => Ok(AlgorithmKind::SmsEmoa),
            "moead" => Ok(AlgorithmKind::Moead),
            _ => Err(Error::InvalidParameters("unknown algorithm")),
        }
    }
}

/// How SMS-EMOA picks its two parents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParentSelection {
    /// Binary tournament on (rank, crowding), as in NSGA-II.
    #[default]
    Tournament,
    /// Uniformly at random from the population.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    /// Ignored by SEMO and SEMOx.
    pub population_size: usize,
    pub budget: u64,
    pub operators: OperatorConfig,
    pub moead_neighbourhood: usize,
    pub smsemoa_parent_selection: ParentSelection,
    pub seed: u64,
}

impl AlgorithmConfig {
    pub fn new(kind: AlgorithmKind, budget: u64, seed: u64) -> Self {
        AlgorithmConfig {
            kind,
            population_size: 100,
            budget,
            operators: OperatorConfig::default(),
            moead_neighbourhood: 20,
            smsemoa_parent_selection: ParentSelection::Tournament,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.operators.validate()?;
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be at least 1"));
        }
        if self.kind.uses_population() {
            if self.population_size < 2 {
                return Err(Error::InvalidConfig("population size must be at least 2"));
            }
            if self.budget < self.population_size as u64 {
                return Err(Error::InvalidConfig("budget must cover the initial population"));
            }
        }
        if self.kind == AlgorithmKind::Moead && self.moead_neighbourhood < 1 {
            return Err(Error::InvalidConfig("MOEA/D neighbourhood must hold at least one subproblem"));
        }
        Ok(())
    }
}

/// One function evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvaluationEvent<'a> {
    /// 1-based; runs from 1 to the budget.
    pub eval_index: u64,
    pub individual: &'a Individual,
    /// Whether the individual entered the external archive.
    pub accepted: bool,
}

/// Hooks into a run. Everything defaults to a no-op.
pub trait Observer {
    /// Called after every evaluation, once the archive has been updated.
    fn on_evaluation(&mut self, _event: &EvaluationEvent<'_>, _archive: &Archive) {}

    /// Called by SEMO/SEMOx before each offspring is evaluated, with the
    /// archive size the parents were drawn from.
    fn on_semo_step(&mut self, _archive_len: usize, _crossover_applied: bool) {}
}

impl Observer for () {}

impl<O: Observer + ?Sized> Observer for &mut O {
    fn on_evaluation(&mut self, event: &EvaluationEvent<'_>, archive: &Archive) {
        (**self).on_evaluation(event, archive)
    }

    fn on_semo_step(&mut self, archive_len: usize, crossover_applied: bool) {
        (**self).on_semo_step(archive_len, crossover_applied)
    }
}

impl<A: Observer, B: Observer> Observer for (A, B) {
    fn on_evaluation(&mut self, event: &EvaluationEvent<'_>, archive: &Archive) {
        self.0.on_evaluation(event, archive);
        self.1.on_evaluation(event, archive);
    }

    fn on_semo_step(&mut self, archive_len: usize, crossover_applied: bool) {
        self.0.on_semo_step(archive_len, crossover_applied);
        self.1.on_semo_step(archive_len, crossover_applied);
    }
}

/// Budget-enforcing evaluation front end shared by all algorithms.
pub struct Evaluator<'p, O> {
    problem: &'p ProblemInstance,
    budget: u64,
    used: u64,
    archive: Archive,
    observer: O,
}

impl<'p, O: Observer> Evaluator<'p, O> {
    pub fn new(problem: &'p ProblemInstance, budget: u64, observer: O) -> Self {
        Evaluator { problem, budget, used: 0, archive: Archive::new(), observer }
    }

    pub fn problem(&self) -> &'p ProblemInstance {
        self.problem
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.used
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn observer_mut(&mut self) -> &mut O {
        &mut self.observer
    }

    /// Prepares (repairs) and evaluates `g`, spending one unit of budget.
    pub fn evaluate(&mut self, g: Genotype) -> Result<Individual> {
        if self.remaining() == 0 {
            return Err(Error::BudgetExhausted);
        }
        let g = self.problem.prepare(g);
        let z = self.problem.evaluate(&g)?;
        Ok(self.record(Individual::new(g, z)))
    }

    /// Evaluates `parent` with `mv` applied, incrementally when the problem
    /// supports it. Spends one unit of budget.
    pub fn evaluate_move(&mut self, parent: &Individual, mv: &Move) -> Result<Individual> {
        if self.remaining() == 0 {
            return Err(Error::BudgetExhausted);
        }
        if self.problem.supports_delta(mv) {
            let z = self.problem.delta_evaluate(parent, mv)?;
            let mut g = parent.genotype.clone();
            mv.apply(&mut g);
            Ok(self.record(Individual::new(g, z)))
        } else {
            let mut g = parent.genotype.clone();
            mv.apply(&mut g);
            self.evaluate(g)
        }
    }

    fn record(&mut self, ind: Individual) -> Individual {
        self.used += 1;
        let accepted = !self.archive.covers(&ind.objectives)
            && matches!(self.archive.insert(ind.clone()), InsertOutcome::Accepted { .. });
        let event = EvaluationEvent { eval_index: self.used, individual: &ind, accepted };
        self.observer.on_evaluation(&event, &self.archive);
        ind
    }

    pub(crate) fn notify_semo_step(&mut self, archive_len: usize, crossover_applied: bool) {
        self.observer.on_semo_step(archive_len, crossover_applied);
    }

    pub fn finish(self) -> RunOutcome<O> {
        RunOutcome { archive: self.archive, evaluations: self.used, observer: self.observer }
    }
}

/// Result of one run: the external archive and the observer handed in.
#[derive(Debug)]
pub struct RunOutcome<O> {
    pub archive: Archive,
    pub evaluations: u64,
    pub observer: O,
}

/// Runs the algorithm named in `config`.
pub fn run<O: Observer>(problem: &ProblemInstance, config: &AlgorithmConfig, observer: O) -> Result<RunOutcome<O>> {
    match config.kind {
        AlgorithmKind::Semo => run_semo(problem, config, observer),
        AlgorithmKind::Semox => run_semox(problem, config, observer),
        AlgorithmKind::Nsga2 => run_nsga2(problem, config, observer),
        AlgorithmKind::SmsEmoa => run_smsemoa(problem, config, observer),
        AlgorithmKind::Moead => run_moead(problem, config, observer),
    }
}

/// Evaluates `n` uniformly random genotypes (or fewer if the budget runs out).
pub(crate) fn random_population<O: Observer, R: Rng>(
    ev: &mut Evaluator<'_, O>,
    n: usize,
    rng: &mut R,
) -> Result<alloc::vec::Vec<Individual>> {
    let mut pop = alloc::vec::Vec::with_capacity(n);
    while pop.len() < n && ev.remaining() > 0 {
        let g = ev.problem().random_genotype(rng);
        pop.push(ev.evaluate(g)?);
    }
    Ok(pop)
}

/// Index of two distinct uniform picks from `0..n` (`n >= 2`).
pub(crate) fn two_distinct<R: Rng>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}
