//! Genetic search over task orderings.
//!
//! Each generation is decoded with the greedy decoder, scored with one of
//! two fitness functions, and replaced by the elite chromosomes plus
//! children bred by roulette-wheel selection, two-point crossover and swap
//! mutation. Infeasible chromosomes have no fitness and never become
//! parents.
//!
//! All random choices come from a single ChaCha stream, drawn in this order
//! for each child: first parent, second parent, dominance coin, the two
//! crossover cuts, then one draw per gene for mutation (plus a partner
//! position whenever a gene mutates). Decoding happens after all draws, so
//! the result does not depend on the number of worker threads.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoder::{decode_population, Chromosome, DecodeOutcome};
use crate::evaluator::{ScheduleAssignment, ScheduleDocument, ScheduleMetrics};
use crate::model::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessKind {
    /// Worst feasible cost in the population minus own cost.
    Linear,
    /// Reciprocal of the cost above the makespan lower bound.
    Inverse,
}

impl FromStr for FitnessKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Self::Linear),
            "inverse" => Ok(Self::Inverse),
            other => Err(format!("unknown fitness `{other}`")),
        }
    }
}

impl fmt::Display for FitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "linear",
            Self::Inverse => "inverse",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Per-gene swap probability.
    pub mutation_rate: f64,
    pub elite_count: usize,
    pub fitness: FitnessKind,
    pub seed: u64,
    /// Decoder threads. Does not affect results.
    pub workers: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 60,
            mutation_rate: 0.001,
            elite_count: 1,
            fitness: FitnessKind::Linear,
            seed: 0,
            workers: 1,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        if self.population_size < 2 {
            return Err(GaError::Config(format!(
                "population size must be at least 2, got {}",
                self.population_size
            )));
        }
        if self.elite_count >= self.population_size {
            return Err(GaError::Config(format!(
                "elite count {} must be below the population size {}",
                self.elite_count, self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(GaError::Config(format!(
                "mutation rate {} is not a probability",
                self.mutation_rate
            )));
        }
        if self.workers == 0 {
            return Err(GaError::Config("at least one worker is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GaError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no chromosome decodes to a feasible schedule; unplaceable subtasks: {}", .unplaceable.join(", "))]
    AllInfeasible { unplaceable: Vec<String> },
    #[error("invalid crossover cuts {cut1}..{cut2} for {len} genes")]
    InvalidCuts {
        cut1: usize,
        cut2: usize,
        len: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Termination {
    GenerationsExhausted,
    PerfectSchedule,
    AllInfeasible,
}

/// Costs of one generation's feasible chromosomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub gen: usize,
    pub min: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<f64>,
    pub feasible_count: usize,
}

impl GenerationStats {
    fn from_costs(gen: usize, costs: &[Option<f64>]) -> Self {
        let feasible: Vec<f64> = costs.iter().flatten().copied().collect();
        let n = feasible.len();
        Self {
            gen,
            min: feasible.iter().copied().reduce(f64::min),
            mean: (n > 0).then(|| feasible.iter().sum::<f64>() / n as f64),
            max: feasible.iter().copied().reduce(f64::max),
            feasible_count: n,
        }
    }
}

/// One generation: chromosomes with their decodes and fitness values.
#[derive(Debug, Clone)]
pub struct Population {
    pub chromosomes: Vec<Chromosome>,
    pub outcomes: Vec<DecodeOutcome>,
    pub fitness: Vec<Option<f64>>,
}

impl Population {
    pub fn costs(&self) -> Vec<Option<f64>> {
        self.outcomes.iter().map(DecodeOutcome::cost).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult {
    pub best: Chromosome,
    pub assignment: ScheduleAssignment,
    pub metrics: ScheduleMetrics,
    pub trace: Vec<GenerationStats>,
    pub termination: Termination,
    pub seed: u64,
}

/// Serialized form of a [`GaResult`]: the schedule file plus search details.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaDocument {
    #[serde(flatten)]
    pub schedule: ScheduleDocument,
    pub order: Vec<String>,
    pub seed: u64,
    pub trace: Vec<GenerationStats>,
    pub termination: Termination,
}

impl GaResult {
    pub fn objective(&self) -> f64 {
        self.metrics.objective
    }

    pub fn to_document(&self, problem: &Problem) -> GaDocument {
        GaDocument {
            schedule: ScheduleDocument::new(
                problem.instance(),
                self.assignment.clone(),
                self.metrics.clone(),
            ),
            order: self.best.ids(problem),
            seed: self.seed,
            trace: self.trace.clone(),
            termination: self.termination,
        }
    }
}

/// Tasks sorted by ready time, ties kept in input order.
pub fn ready_time_order(problem: &Problem) -> Chromosome {
    let mut order: Vec<usize> = (0..problem.tasks().len()).collect();
    order.sort_by_key(|&i| problem.tasks()[i].ready);
    Chromosome::new(order)
}

/// Tasks sorted by placement slack: the number of periods in which every
/// worker type the task needs is rostered, minus its minimum makespan.
/// Tasks confined to few periods come first.
pub fn slack_order(problem: &Problem) -> Chromosome {
    let slack: Vec<i64> = problem
        .tasks()
        .iter()
        .map(|task| {
            let mut types: Vec<usize> = task
                .subtasks
                .clone()
                .flat_map(|j| problem.subtasks()[j].requirements.iter().map(|&(p, _)| p))
                .collect();
            types.sort_unstable();
            types.dedup();
            let open = (0..problem.horizon())
                .filter(|&t| types.iter().all(|&p| problem.available(p, t) > 0))
                .count() as i64;
            open - i64::from(task.min_makespan)
        })
        .collect();
    let mut order: Vec<usize> = (0..problem.tasks().len()).collect();
    order.sort_by_key(|&i| slack[i]);
    Chromosome::new(order)
}

/// Two heuristic orderings followed by uniformly random permutations.
pub fn seed_population(
    problem: &Problem,
    config: &GaConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Chromosome>, GaError> {
    config.validate()?;
    let n = problem.tasks().len();
    let mut chromosomes = vec![ready_time_order(problem), slack_order(problem)];
    while chromosomes.len() < config.population_size {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        chromosomes.push(Chromosome::new(order));
    }
    Ok(chromosomes)
}

/// Fitness values, or the index of a chromosome that reached the lower bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Fitness {
    Scores(Vec<Option<f64>>),
    Perfect(usize),
}

fn all_infeasible() -> GaError {
    GaError::AllInfeasible {
        unplaceable: Vec::new(),
    }
}

/// `max(feasible costs) - cost`; infeasible chromosomes get `None`.
pub fn fitness_linear(costs: &[Option<f64>]) -> Result<Vec<Option<f64>>, GaError> {
    let worst = costs
        .iter()
        .flatten()
        .copied()
        .reduce(f64::max)
        .ok_or_else(all_infeasible)?;
    Ok(costs.iter().map(|c| c.map(|c| worst - c)).collect())
}

fn is_perfect(cost: f64, lower_bound: f64) -> bool {
    cost - lower_bound <= 1e-9 * lower_bound.abs().max(1.0)
}

/// `1 / (cost - lower_bound)`. A cost at the bound is a perfect schedule.
pub fn fitness_inverse(costs: &[Option<f64>], lower_bound: f64) -> Result<Fitness, GaError> {
    if costs.iter().all(Option::is_none) {
        return Err(all_infeasible());
    }
    if let Some(i) = costs
        .iter()
        .position(|c| c.is_some_and(|c| is_perfect(c, lower_bound)))
    {
        return Ok(Fitness::Perfect(i));
    }
    Ok(Fitness::Scores(
        costs
            .iter()
            .map(|c| {
                c.map(|c| {
                    let gap = c - lower_bound;
                    assert!(gap > 0.0, "cost {c} below the lower bound {lower_bound}");
                    1.0 / gap
                })
            })
            .collect(),
    ))
}

/// Roulette-wheel draw among chromosomes with a fitness. When every
/// fitness is zero the draw is uniform over those chromosomes.
///
/// Panics if no chromosome has a fitness.
pub fn select_parent(fitness: &[Option<f64>], rng: &mut impl Rng) -> usize {
    let total: f64 = fitness.iter().flatten().sum();
    if total > 0.0 && total.is_finite() {
        let mut ball = rng.random::<f64>() * total;
        let mut last = 0;
        for (i, f) in fitness.iter().enumerate() {
            if let Some(f) = *f {
                if f > 0.0 {
                    if ball < f {
                        return i;
                    }
                    ball -= f;
                    last = i;
                }
            }
        }
        return last;
    }
    let feasible: Vec<usize> = (0..fitness.len())
        .filter(|&i| fitness[i].is_some())
        .collect();
    assert!(!feasible.is_empty(), "no feasible parent");
    feasible[rng.random_range(0..feasible.len())]
}

/// Two independent roulette draws.
pub fn select_parents(fitness: &[Option<f64>], rng: &mut impl Rng) -> (usize, usize) {
    (select_parent(fitness, rng), select_parent(fitness, rng))
}

/// Two distinct gene boundaries from `0..=len`, sorted.
pub fn sample_cuts(len: usize, rng: &mut impl Rng) -> (usize, usize) {
    let a = rng.random_range(0..=len);
    let mut b = rng.random_range(0..len);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

/// Two-point crossover.
///
/// Genes strictly between the cuts form the inside segment. If it holds at
/// least as many genes as the outside, the dominant parent's inside genes
/// are kept in place; otherwise its outside genes are. The free positions
/// are then filled left to right with the missing tasks in the order they
/// appear in the other parent.
pub fn crossover(
    dominant: &Chromosome,
    other: &Chromosome,
    cut1: usize,
    cut2: usize,
) -> Result<Chromosome, GaError> {
    let len = dominant.len();
    if cut1 >= cut2 || cut2 > len || other.len() != len {
        return Err(GaError::InvalidCuts { cut1, cut2, len });
    }
    let inside = cut2 - cut1;
    let keep_inside = inside >= len - inside;
    let kept = |pos: usize| (cut1..cut2).contains(&pos) == keep_inside;

    let mut child = vec![usize::MAX; len];
    let mut used = vec![false; len];
    for pos in (0..len).filter(|&p| kept(p)) {
        child[pos] = dominant.order()[pos];
        used[child[pos]] = true;
    }
    let mut fill = other.order().iter().filter(|&&g| !used[g]);
    for pos in (0..len).filter(|&p| !kept(p)) {
        child[pos] = *fill
            .next()
            .expect("parents are permutations of the same tasks");
    }
    Ok(Chromosome::new(child))
}

pub fn swap_genes(chromosome: &mut Chromosome, a: usize, b: usize) {
    chromosome.order_mut().swap(a, b);
}

/// Each gene, with probability `rate`, swaps with a uniformly chosen other
/// position.
pub fn mutate(mut chromosome: Chromosome, rng: &mut impl Rng, rate: f64) -> Chromosome {
    let n = chromosome.len();
    for i in 0..n {
        if rng.random::<f64>() < rate && n > 1 {
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            swap_genes(&mut chromosome, i, j);
        }
    }
    chromosome
}

fn evaluate(
    pool: &rayon::ThreadPool,
    problem: &Problem,
    chromosomes: &[Chromosome],
) -> Vec<DecodeOutcome> {
    pool.install(|| decode_population(problem, chromosomes))
}

/// Runs the genetic algorithm. Deterministic in `(problem, config)`
/// regardless of `config.workers`.
pub fn run_ga(problem: &Problem, config: &GaConfig) -> Result<GaResult, GaError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| GaError::Config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let lower_bound = problem.makespan_lower_bound();

    let chromosomes = seed_population(problem, config, &mut rng)?;
    let outcomes = evaluate(&pool, problem, &chromosomes);
    if outcomes.iter().all(|o| !o.is_feasible()) {
        let mut unplaceable: Vec<String> = Vec::new();
        for o in &outcomes {
            if let DecodeOutcome::Infeasible { subtask } = o {
                if !unplaceable.contains(subtask) {
                    unplaceable.push(subtask.clone());
                }
            }
        }
        return Err(GaError::AllInfeasible { unplaceable });
    }
    let mut population = Population {
        chromosomes,
        outcomes,
        fitness: Vec::new(),
    };

    let mut trace = Vec::with_capacity(config.generations + 1);
    let mut best: Option<(f64, usize, Chromosome, DecodeOutcome)> = None;
    let termination = 'run: {
        for gen in 0..=config.generations {
            let costs = population.costs();
            trace.push(GenerationStats::from_costs(gen, &costs));
            if costs.iter().all(Option::is_none) {
                break 'run Termination::AllInfeasible;
            }
            for (i, cost) in costs.iter().enumerate() {
                if let Some(c) = *cost {
                    if best.as_ref().is_none_or(|b| c < b.0) {
                        best = Some((
                            c,
                            gen,
                            population.chromosomes[i].clone(),
                            population.outcomes[i].clone(),
                        ));
                    }
                }
            }
            let best_cost = best
                .as_ref()
                .map(|b| b.0)
                .expect("a feasible cost was seen");
            if is_perfect(best_cost, lower_bound) {
                break 'run Termination::PerfectSchedule;
            }
            if gen == config.generations {
                break 'run Termination::GenerationsExhausted;
            }

            population.fitness = match config.fitness {
                FitnessKind::Linear => fitness_linear(&costs)?,
                FitnessKind::Inverse => match fitness_inverse(&costs, lower_bound)? {
                    Fitness::Scores(s) => s,
                    Fitness::Perfect(_) => unreachable!("perfect schedules end the run above"),
                },
            };
            population = breed(&pool, problem, config, &population, &costs, &mut rng);
        }
        unreachable!("the final generation always terminates")
    };

    let (_, _, chromosome, outcome) = best.expect("generation 0 had a feasible chromosome");
    let DecodeOutcome::Feasible {
        assignment,
        metrics,
    } = outcome
    else {
        unreachable!("best is always feasible")
    };
    Ok(GaResult {
        best: chromosome,
        assignment,
        metrics,
        trace,
        termination,
        seed: config.seed,
    })
}

fn breed(
    pool: &rayon::ThreadPool,
    problem: &Problem,
    config: &GaConfig,
    parents: &Population,
    costs: &[Option<f64>],
    rng: &mut ChaCha8Rng,
) -> Population {
    let mut ranked: Vec<usize> = (0..costs.len()).filter(|&i| costs[i].is_some()).collect();
    ranked.sort_by(|&a, &b| costs[a].partial_cmp(&costs[b]).expect("costs are finite"));
    ranked.truncate(config.elite_count);

    let mut chromosomes: Vec<Chromosome> = ranked
        .iter()
        .map(|&i| parents.chromosomes[i].clone())
        .collect();
    let mut outcomes: Vec<DecodeOutcome> = ranked
        .iter()
        .map(|&i| parents.outcomes[i].clone())
        .collect();
    let elites = chromosomes.len();

    let n = problem.tasks().len();
    while chromosomes.len() < config.population_size {
        let (a, b) = select_parents(&parents.fitness, rng);
        let (dominant, other) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
        let (cut1, cut2) = sample_cuts(n, rng);
        let child = crossover(
            &parents.chromosomes[dominant],
            &parents.chromosomes[other],
            cut1,
            cut2,
        )
        .expect("sampled cuts are valid");
        chromosomes.push(mutate(child, rng, config.mutation_rate));
    }
    outcomes.extend(evaluate(pool, problem, &chromosomes[elites..]));
    Population {
        chromosomes,
        outcomes,
        fitness: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use indexmap::IndexMap;

    use super::*;
    use crate::evaluator::check_schedule;
    use crate::fixtures::two_tasks;
    use crate::model::Instance;

    fn letters(s: &str) -> Chromosome {
        Chromosome::new(s.bytes().map(|b| (b - b'A') as usize).collect())
    }

    fn show(c: &Chromosome) -> String {
        c.order()
            .iter()
            .map(|&g| (b'A' + g as u8) as char)
            .collect()
    }

    #[test]
    fn crossover_keeps_inside_segment() {
        let child = crossover(&letters("ABCDEFGHIJ"), &letters("JIHGFEDCBA"), 1, 7).unwrap();
        assert_eq!(show(&child), "JBCDEFGIHA");
    }

    #[test]
    fn crossover_keeps_outside_when_larger() {
        let child = crossover(&letters("ABCDEFGHIJ"), &letters("JIHGFEDCBA"), 4, 6).unwrap();
        assert_eq!(show(&child), "ABCDFEGHIJ");
    }

    #[test]
    fn crossover_tie_keeps_inside() {
        let child = crossover(&letters("ABCDEFGH"), &letters("HGFEDCBA"), 2, 6).unwrap();
        assert_eq!(show(&child), "HGCDEFBA");
    }

    #[test]
    fn crossover_edge_cases() {
        let p = letters("ABCDE");
        assert_eq!(crossover(&p, &p, 1, 3).unwrap(), p);
        assert!(matches!(
            crossover(&p, &p, 3, 3),
            Err(GaError::InvalidCuts { .. })
        ));
        assert!(crossover(&p, &p, 0, 6).is_err());
    }

    #[test]
    fn mutation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = letters("ABCDEFGHIJ");
        assert_eq!(mutate(c.clone(), &mut rng, 0.0), c);
        let two = mutate(letters("AB"), &mut rng, 1.0);
        assert!(two.is_permutation(2));
        let mut forced = c.clone();
        swap_genes(&mut forced, 2, 6);
        assert_eq!(show(&forced), "ABGDEFCHIJ");
    }

    #[test]
    fn linear_fitness() {
        assert_eq!(
            fitness_linear(&[Some(6.0), Some(10.0)]).unwrap(),
            vec![Some(4.0), Some(0.0)]
        );
        assert_eq!(
            fitness_linear(&[Some(7.0), Some(7.0), Some(7.0)]).unwrap(),
            vec![Some(0.0); 3]
        );
        assert_eq!(
            fitness_linear(&[Some(42.0), None]).unwrap(),
            vec![Some(0.0), None]
        );
        assert!(matches!(
            fitness_linear(&[None, None]),
            Err(GaError::AllInfeasible { .. })
        ));
    }

    #[test]
    fn inverse_fitness() {
        assert_eq!(
            fitness_inverse(&[Some(6.0), Some(10.0)], 6.0).unwrap(),
            Fitness::Perfect(0)
        );
        assert_eq!(
            fitness_inverse(&[Some(10.0)], 6.0).unwrap(),
            Fitness::Scores(vec![Some(0.25)])
        );
        assert_eq!(
            fitness_inverse(&[Some(8.0), Some(7.0), None], 6.0).unwrap(),
            Fitness::Scores(vec![Some(0.5), Some(1.0), None])
        );
    }

    #[test]
    fn both_fitnesses_rank_cheapest_first() {
        let costs = [Some(12.0), Some(9.0), None, Some(15.0)];
        let lin = fitness_linear(&costs).unwrap();
        let Fitness::Scores(inv) = fitness_inverse(&costs, 6.0).unwrap() else {
            panic!()
        };
        let argmax = |f: &[Option<f64>]| {
            (0..f.len())
                .filter(|&i| f[i].is_some())
                .max_by(|&a, &b| f[a].partial_cmp(&f[b]).unwrap())
                .unwrap()
        };
        assert_eq!(argmax(&lin), 1);
        assert_eq!(argmax(&inv), 1);
    }

    fn frequency(fitness: &[Option<f64>], draws: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut counts = vec![0usize; fitness.len()];
        for _ in 0..draws {
            counts[select_parent(fitness, &mut rng)] += 1;
        }
        counts.iter().map(|&c| c as f64 / draws as f64).collect()
    }

    #[test]
    fn roulette_frequencies() {
        assert_eq!(frequency(&[Some(4.0), Some(0.0)], 10_000), vec![1.0, 0.0]);
        let f = frequency(&[Some(1.0), Some(1.0)], 10_000);
        assert!((f[0] - 0.5).abs() < 0.05, "{f:?}");
        let f = frequency(&[Some(3.0), Some(1.0)], 10_000);
        assert!(
            (f[0] - 0.75).abs() < 0.05 && (f[1] - 0.25).abs() < 0.05,
            "{f:?}"
        );
        // all-zero fitness falls back to uniform over feasible chromosomes
        let f = frequency(&[Some(0.0), None, Some(0.0), Some(0.0)], 30_000);
        assert_eq!(f[1], 0.0);
        for i in [0, 2, 3] {
            assert!((f[i] - 1.0 / 3.0).abs() < 0.02, "{f:?}");
        }
    }

    #[test]
    fn cut_sampling_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..12 {
            for _ in 0..200 {
                let (a, b) = sample_cuts(n, &mut rng);
                assert!(a < b && b <= n);
            }
        }
    }

    #[test]
    fn seeded_population_heuristics() {
        let p = Problem::new(two_tasks()).unwrap();
        let config = GaConfig {
            population_size: 6,
            ..GaConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pop = seed_population(&p, &config, &mut rng).unwrap();
        assert_eq!(pop[0].order(), &[0, 1]);
        assert_eq!(pop.len(), 6);
        let again = seed_population(&p, &config, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(pop, again);
        let bad = GaConfig {
            population_size: 1,
            elite_count: 0,
            ..GaConfig::default()
        };
        assert!(matches!(
            seed_population(&p, &bad, &mut rng),
            Err(GaError::Config(_))
        ));
    }

    #[test]
    fn slack_heuristic_puts_confined_task_first() {
        let mut inst = two_tasks();
        inst.worker_types.push(crate::model::WorkerType {
            id: "rare".into(),
            label: "Rare".into(),
        });
        let mut rare = vec![0; 10];
        rare[..4].fill(1);
        inst.availability.insert("rare".into(), rare);
        inst.tasks[1].subtasks[0].requirements = IndexMap::from([("rare".to_string(), 1)]);
        let p = Problem::new(inst).unwrap();
        assert_eq!(slack_order(&p).order()[0], 1);
    }

    #[test]
    fn two_tasks_reaches_optimum() {
        let p = Problem::new(two_tasks()).unwrap();
        for seed in 0..5 {
            for fitness in [FitnessKind::Linear, FitnessKind::Inverse] {
                let config = GaConfig {
                    seed,
                    fitness,
                    ..GaConfig::default()
                };
                let r = run_ga(&p, &config).unwrap();
                assert_eq!(r.objective(), 6.0);
                assert_eq!(r.termination, Termination::PerfectSchedule);
                assert!(check_schedule(p.instance(), &r.assignment)
                    .unwrap()
                    .is_empty());
            }
        }
    }

    /// Both tasks due at period 3 with one worker: one of them is always
    /// late, so no schedule reaches the bound.
    fn imperfect() -> Instance {
        let mut inst = two_tasks();
        for t in &mut inst.tasks {
            t.ready_time = 0;
            t.deadline = 3;
        }
        inst
    }

    #[test]
    fn zero_generations_returns_best_initial() {
        let p = Problem::new(imperfect()).unwrap();
        let config = GaConfig {
            generations: 0,
            population_size: 4,
            ..GaConfig::default()
        };
        let r = run_ga(&p, &config).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.termination, Termination::GenerationsExhausted);
        assert_eq!(Some(r.objective()), r.trace[0].min);
    }

    #[test]
    fn determinism_across_worker_counts() {
        let p = Problem::new(imperfect()).unwrap();
        let run = |workers| {
            let config = GaConfig {
                seed: 17,
                workers,
                generations: 10,
                population_size: 20,
                ..GaConfig::default()
            };
            serde_json::to_string(&run_ga(&p, &config).unwrap().to_document(&p)).unwrap()
        };
        assert_eq!(run(1), run(1));
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn all_infeasible_names_subtasks() {
        let mut inst = Instance {
            num_bays: 0,
            ..two_tasks()
        };
        inst.tasks[0].requires_bay = true;
        inst.tasks[1].requires_bay = true;
        let p = Problem::new(inst).unwrap();
        let err = run_ga(&p, &GaConfig::default()).unwrap_err();
        // bay conflicts push each task until its second subtask overruns
        assert_eq!(
            err,
            GaError::AllInfeasible {
                unplaceable: vec!["A2".into(), "B2".into()]
            }
        );
    }
}
