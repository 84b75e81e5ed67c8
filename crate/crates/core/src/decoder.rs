//! Greedy serial schedule generation.
//!
//! A [`Chromosome`] is an ordering of tasks. [`decode`] walks it and places
//! each task's subtasks, in topological order, at the earliest period where
//! the precedence, ready-time, worker and horizon constraints all hold.
//! Earlier tasks are never moved to make room for later ones.
//!
//! Bay tasks hold a bay from their first subtask start to their last
//! subtask end. For those the decoder keeps a candidate task start: the
//! subtasks are placed tentatively at or after it, and if the resulting
//! interval hits a period whose bays are all taken the placement is undone
//! and the candidate moves to the period after that conflict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluator::{LatenessMode, ScheduleAssignment, ScheduleMetrics};
use crate::model::{Period, Problem};

/// A permutation of task indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chromosome {
    order: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChromosomeError {
    #[error("unknown task `{0}` in ordering")]
    UnknownTask(String),
    #[error("ordering is not a permutation of the {expected} tasks")]
    NotPermutation { expected: usize },
}

impl Chromosome {
    pub fn new(order: Vec<usize>) -> Self {
        Self { order }
    }

    /// Identity ordering `0..n`.
    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect())
    }

    pub fn from_ids<S: AsRef<str>>(problem: &Problem, ids: &[S]) -> Result<Self, ChromosomeError> {
        let order = ids
            .iter()
            .map(|id| {
                problem
                    .task_by_id(id.as_ref())
                    .ok_or_else(|| ChromosomeError::UnknownTask(id.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let chromosome = Self::new(order);
        chromosome.validate(problem.tasks().len())?;
        Ok(chromosome)
    }

    pub fn validate(&self, n: usize) -> Result<(), ChromosomeError> {
        if self.is_permutation(n) {
            Ok(())
        } else {
            Err(ChromosomeError::NotPermutation { expected: n })
        }
    }

    pub fn is_permutation(&self, n: usize) -> bool {
        if self.order.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        self.order
            .iter()
            .all(|&g| g < n && !std::mem::replace(&mut seen[g], true))
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn order_mut(&mut self) -> &mut [usize] {
        &mut self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn ids(&self, problem: &Problem) -> Vec<String> {
        self.order
            .iter()
            .map(|&t| problem.task_id(t).to_string())
            .collect()
    }
}

/// Result of decoding one chromosome.
#[derive(Debug, Clone, PartialEq)]
pub enum DecodeOutcome {
    Feasible {
        assignment: ScheduleAssignment,
        metrics: ScheduleMetrics,
    },
    /// No placement within the horizon for this subtask.
    Infeasible { subtask: String },
}

impl DecodeOutcome {
    pub fn cost(&self) -> Option<f64> {
        match self {
            Self::Feasible { metrics, .. } => Some(metrics.objective),
            Self::Infeasible { .. } => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }
}

struct Placer<'a> {
    problem: &'a Problem,
    horizon: Period,
    remaining: Vec<u32>,
    bays_used: Vec<u32>,
    starts: Vec<Period>,
}

impl<'a> Placer<'a> {
    fn new(problem: &'a Problem) -> Self {
        let horizon = problem.horizon();
        Self {
            problem,
            horizon,
            remaining: problem.availability().to_vec(),
            bays_used: vec![0; horizon as usize],
            starts: vec![0; problem.subtasks().len()],
        }
    }

    #[inline]
    fn cell(&self, worker_type: usize, t: Period) -> usize {
        worker_type * self.horizon as usize + t as usize
    }

    /// Earliest start `>= from` with enough workers for the whole run.
    fn earliest_start(&self, subtask: usize, from: Period) -> Option<Period> {
        let info = &self.problem.subtasks()[subtask];
        let mut s = from;
        loop {
            if s + info.duration > self.horizon {
                return None;
            }
            let short = (s..s + info.duration).find(|&t| {
                info.requirements
                    .iter()
                    .any(|&(p, count)| self.remaining[self.cell(p, t)] < count)
            });
            match short {
                Some(t) => s = t + 1,
                None => return Some(s),
            }
        }
    }

    fn book(&mut self, subtask: usize, start: Period, release: bool) {
        let info = &self.problem.subtasks()[subtask];
        for t in start..start + info.duration {
            for &(p, count) in &info.requirements {
                let c = self.cell(p, t);
                if release {
                    self.remaining[c] += count;
                } else {
                    self.remaining[c] -= count;
                }
            }
        }
    }

    /// Places all subtasks of `task` at or after `from`. On failure the
    /// partial placement is undone and the blocking subtask returned.
    fn place_task(&mut self, task: usize, from: Period) -> Result<(Period, Period), usize> {
        let info = &self.problem.tasks()[task];
        let mut interval = (Period::MAX, 0);
        for (k, &j) in info.topo.iter().enumerate() {
            let sub = &self.problem.subtasks()[j];
            let est = sub
                .predecessors
                .iter()
                .map(|&p| self.starts[p] + self.problem.subtasks()[p].duration)
                .fold(from.max(info.ready), Period::max);
            match self.earliest_start(j, est) {
                Some(s) => {
                    self.starts[j] = s;
                    self.book(j, s, false);
                    interval = (interval.0.min(s), interval.1.max(s + sub.duration));
                }
                None => {
                    self.unplace(task, k);
                    return Err(j);
                }
            }
        }
        Ok(interval)
    }

    /// Releases the first `count` subtasks of `task` in placement order.
    fn unplace(&mut self, task: usize, count: usize) {
        let topo = &self.problem.tasks()[task].topo;
        for &j in &topo[..count] {
            self.book(j, self.starts[j], true);
        }
    }

    fn schedule(&mut self, task: usize) -> Result<(Period, Period), usize> {
        let info = &self.problem.tasks()[task];
        if !info.requires_bay {
            return self.place_task(task, info.ready);
        }
        let bays = self.problem.num_bays();
        let mut from = info.ready;
        for _ in 0..=self.horizon {
            let (lo, hi) = self.place_task(task, from)?;
            match (lo..hi).find(|&t| self.bays_used[t as usize] >= bays) {
                None => {
                    for t in lo..hi {
                        self.bays_used[t as usize] += 1;
                    }
                    return Ok((lo, hi));
                }
                Some(conflict) => {
                    self.unplace(task, info.topo.len());
                    from = conflict + 1;
                }
            }
        }
        Err(info.topo[0])
    }
}

/// Greedily turns a task ordering into a schedule.
///
/// Panics if `chromosome` is not a permutation of the problem's tasks.
pub fn decode(problem: &Problem, chromosome: &Chromosome) -> DecodeOutcome {
    assert!(
        chromosome.is_permutation(problem.tasks().len()),
        "chromosome is not a permutation of the tasks"
    );
    let mut placer = Placer::new(problem);
    let mut intervals = vec![(0, 0); problem.tasks().len()];
    for &task in chromosome.order() {
        match placer.schedule(task) {
            Ok(iv) => intervals[task] = iv,
            Err(j) => {
                return DecodeOutcome::Infeasible {
                    subtask: problem.subtask_id(j).to_string(),
                }
            }
        }
    }
    let starts = placer
        .starts
        .iter()
        .enumerate()
        .map(|(j, &s)| (problem.subtask_id(j).to_string(), s))
        .collect();
    DecodeOutcome::Feasible {
        assignment: ScheduleAssignment::new(starts),
        metrics: ScheduleMetrics::from_intervals(
            problem.instance(),
            &intervals,
            LatenessMode::Clamped,
        ),
    }
}

/// Decodes every chromosome, in parallel on the current rayon pool. The
/// output is aligned with the input.
pub fn decode_population(problem: &Problem, chromosomes: &[Chromosome]) -> Vec<DecodeOutcome> {
    chromosomes.par_iter().map(|c| decode(problem, c)).collect()
}

#[cfg(test)]
mod tests {
    use indexmap::IndexMap;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::evaluator::{check_schedule, compute_metrics};
    use crate::fixtures::two_tasks;
    use crate::model::{Instance, Subtask, Task, WorkerType};
    use crate::scenario::{random_instance, TemplateConfig};

    fn two_tasks_problem() -> Problem {
        Problem::new(two_tasks()).unwrap()
    }

    fn decode_ids(p: &Problem, ids: &[&str]) -> DecodeOutcome {
        decode(p, &Chromosome::from_ids(p, ids).unwrap())
    }

    fn starts_of(outcome: &DecodeOutcome) -> IndexMap<String, Period> {
        match outcome {
            DecodeOutcome::Feasible { assignment, .. } => assignment.starts.clone(),
            other => panic!("infeasible: {other:?}"),
        }
    }

    #[test]
    fn two_tasks_order_12() {
        let p = two_tasks_problem();
        let out = decode_ids(&p, &["task1", "task2"]);
        let s = starts_of(&out);
        assert_eq!((s["A1"], s["A2"], s["B1"], s["B2"]), (0, 1, 3, 4));
        assert_eq!(out.cost(), Some(6.0));
    }

    #[test]
    fn two_tasks_order_21() {
        let p = two_tasks_problem();
        let out = decode_ids(&p, &["task2", "task1"]);
        let s = starts_of(&out);
        assert_eq!((s["B1"], s["B2"], s["A1"], s["A2"]), (2, 3, 0, 5));
        assert_eq!(out.cost(), Some(10.0));
        if let DecodeOutcome::Feasible { metrics, .. } = &out {
            assert_eq!(metrics.per_task["task1"].makespan, 7);
        }
    }

    /// Electricians are only rostered for the first two periods; once two
    /// earlier tasks use them up, the bay task behind them cannot be placed.
    fn early_electrician() -> Instance {
        let one = |id: &str, sub: &str, bay: bool| Task {
            id: id.into(),
            ready_time: 0,
            deadline: 10,
            requires_bay: bay,
            makespan_weight: 1.0,
            lateness_weight: 1.0,
            subtasks: vec![Subtask {
                id: sub.into(),
                duration: 1,
                requirements: IndexMap::from([("elec".to_string(), 1)]),
                predecessors: vec![],
            }],
        };
        let mut roster = vec![0; 10];
        roster[0] = 1;
        roster[1] = 1;
        Instance {
            period_minutes: 60,
            horizon_periods: 10,
            num_bays: 1,
            worker_types: vec![WorkerType {
                id: "elec".into(),
                label: "Electrician".into(),
            }],
            availability: IndexMap::from([("elec".to_string(), roster)]),
            tasks: vec![
                one("t1", "s1", false),
                one("t2", "s2", false),
                one("bay", "sb", true),
            ],
        }
    }

    #[test]
    fn late_bay_task_is_unplaceable() {
        let p = Problem::new(early_electrician()).unwrap();
        assert_eq!(
            decode_ids(&p, &["t1", "t2", "bay"]),
            DecodeOutcome::Infeasible {
                subtask: "sb".into()
            }
        );
        // Scheduling the bay task first moves the shortage onto t2.
        assert_eq!(
            decode_ids(&p, &["bay", "t1", "t2"]),
            DecodeOutcome::Infeasible {
                subtask: "s2".into()
            }
        );
    }

    #[test]
    fn bay_conflict_moves_candidate_start() {
        let mut inst = two_tasks();
        inst.tasks[0].requires_bay = true;
        inst.tasks[1].requires_bay = true;
        inst.tasks[1].ready_time = 0;
        inst.availability.insert("worker".into(), vec![2; 10]);
        let p = Problem::new(inst).unwrap();
        let s = starts_of(&decode_ids(&p, &["task1", "task2"]));
        assert_eq!((s["A1"], s["A2"], s["B1"], s["B2"]), (0, 1, 3, 4));
    }

    #[test]
    fn no_bays_means_bay_tasks_fail() {
        let mut inst = two_tasks();
        inst.num_bays = 0;
        inst.tasks[1].requires_bay = true;
        let p = Problem::new(inst).unwrap();
        assert!(!decode_ids(&p, &["task1", "task2"]).is_feasible());
    }

    #[test]
    fn population_matches_elementwise() {
        let p = two_tasks_problem();
        let c12 = Chromosome::new(vec![0, 1]);
        let c21 = Chromosome::new(vec![1, 0]);
        let out = decode_population(&p, &[c12.clone(), c21, c12]);
        let costs: Vec<_> = out.iter().map(DecodeOutcome::cost).collect();
        assert_eq!(costs, vec![Some(6.0), Some(10.0), Some(6.0)]);
        assert_eq!(out[0], out[2]);
        assert!(decode_population(&p, &[]).is_empty());
    }

    #[test]
    fn rejects_bad_orderings() {
        let p = two_tasks_problem();
        assert_eq!(
            Chromosome::from_ids(&p, &["task1", "task1"]),
            Err(ChromosomeError::NotPermutation { expected: 2 })
        );
        assert_eq!(
            Chromosome::from_ids(&p, &["task9", "task1"]),
            Err(ChromosomeError::UnknownTask("task9".into()))
        );
    }

    fn random_case(seed: u64, ample: bool) -> (Problem, Vec<Chromosome>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let config = if ample {
            TemplateConfig::ample_small()
        } else {
            TemplateConfig::tiny()
        };
        let problem = Problem::new(random_instance(&config, &mut rng)).unwrap();
        let n = problem.tasks().len();
        let orders = (0..4)
            .map(|_| {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                Chromosome::new(order)
            })
            .collect();
        (problem, orders)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn feasible_decodes_pass_the_checker(seed in any::<u64>()) {
            let (problem, orders) = random_case(seed, false);
            for c in &orders {
                if let DecodeOutcome::Feasible { assignment, metrics } = decode(&problem, c) {
                    let inst = problem.instance();
                    prop_assert!(check_schedule(inst, &assignment).unwrap().is_empty());
                    prop_assert_eq!(compute_metrics(inst, &assignment).unwrap(), metrics);
                }
            }
        }

        #[test]
        fn ample_resources_never_fail(seed in any::<u64>()) {
            let (problem, orders) = random_case(seed, true);
            for c in &orders {
                prop_assert!(decode(&problem, c).is_feasible());
            }
        }

        #[test]
        fn no_subtask_can_start_earlier(seed in any::<u64>()) {
            let (problem, orders) = random_case(seed, false);
            let inst = problem.instance();
            for c in &orders {
                let DecodeOutcome::Feasible { assignment, .. } = decode(&problem, c) else {
                    continue;
                };
                for (id, &start) in &assignment.starts {
                    for earlier in 0..start {
                        let mut moved = assignment.clone();
                        moved.starts[id] = earlier;
                        prop_assert!(
                            !check_schedule(inst, &moved).unwrap().is_empty(),
                            "{} could start at {} instead of {}", id, earlier, start
                        );
                    }
                }
            }
        }
    }
}
