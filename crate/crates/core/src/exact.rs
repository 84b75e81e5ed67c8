//! Exact branch-and-bound over subtask start times, for tiny instances.
//!
//! Subtasks are fixed one at a time in task input order and, within a task,
//! in topological order; start periods are tried in ascending order. A node
//! is pruned when the cost of finished tasks plus an admissible bound for
//! the open and untouched tasks cannot beat the incumbent.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluator::ScheduleAssignment;
use crate::model::{Period, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExactStatus {
    Optimal,
    /// The node budget ran out; the schedule is the best found so far.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub assignment: ScheduleAssignment,
    pub objective: f64,
    pub status: ExactStatus,
    pub nodes: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance has no feasible schedule")]
    InfeasibleInstance,
    #[error("node budget of {0} exhausted before any feasible schedule was found")]
    BudgetExceeded(u64),
}

/// Σ f_i · min_makespan_i. Admissible while lateness is clamped at zero.
pub fn lower_bound(problem: &Problem) -> f64 {
    problem.makespan_lower_bound()
}

const EPS: f64 = 1e-9;

struct Search<'a> {
    problem: &'a Problem,
    horizon: Period,
    order: Vec<usize>,
    /// Bound for each task before any of its subtasks is fixed, as a suffix
    /// sum over tasks `i..`.
    untouched_suffix: Vec<f64>,
    remaining: Vec<u32>,
    bays_used: Vec<u32>,
    starts: Vec<Period>,
    placed: Vec<bool>,
    best: Option<(f64, Vec<Period>)>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    est: Vec<Period>,
}

impl<'a> Search<'a> {
    fn new(problem: &'a Problem, budget: u64) -> Self {
        let order: Vec<usize> = problem
            .tasks()
            .iter()
            .flat_map(|t| t.topo.iter().copied())
            .collect();
        let mut untouched_suffix = vec![0.0; problem.tasks().len() + 1];
        for (i, t) in problem.tasks().iter().enumerate().rev() {
            let late = (t.ready + t.min_makespan).saturating_sub(t.deadline);
            untouched_suffix[i] = untouched_suffix[i + 1]
                + t.makespan_weight * f64::from(t.min_makespan)
                + t.lateness_weight * f64::from(late);
        }
        let n = problem.subtasks().len();
        Self {
            problem,
            horizon: problem.horizon(),
            order,
            untouched_suffix,
            remaining: problem.availability().to_vec(),
            bays_used: vec![0; problem.horizon() as usize],
            starts: vec![0; n],
            placed: vec![false; n],
            best: None,
            nodes: 0,
            budget,
            exhausted: false,
            est: vec![0; n],
        }
    }

    fn cell(&self, p: usize, t: Period) -> usize {
        p * self.horizon as usize + t as usize
    }

    /// Interval spanned by the fixed subtasks of `task`.
    fn placed_interval(&self, task: usize) -> Option<(Period, Period)> {
        let info = &self.problem.tasks()[task];
        info.subtasks
            .clone()
            .filter(|&j| self.placed[j])
            .map(|j| {
                (
                    self.starts[j],
                    self.starts[j] + self.problem.subtasks()[j].duration,
                )
            })
            .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
    }

    /// Cost of a task once all of its subtasks are fixed.
    fn task_cost(&self, task: usize) -> f64 {
        let info = &self.problem.tasks()[task];
        let (lo, hi) = self.placed_interval(task).expect("task is complete");
        info.makespan_weight * f64::from(hi - lo)
            + info.lateness_weight * f64::from(hi.saturating_sub(info.deadline))
    }

    /// Lower bound on the final cost of a partially fixed task: unfixed
    /// subtasks cannot start before their ready time or their
    /// predecessors' earliest finish, and adding subtasks only widens the
    /// task interval.
    fn open_task_bound(&mut self, task: usize) -> f64 {
        let info = &self.problem.tasks()[task];
        let mut finish = 0;
        let mut first_start = Period::MAX;
        for &j in &info.topo {
            let sub = &self.problem.subtasks()[j];
            if self.placed[j] {
                self.est[j] = self.starts[j];
                first_start = first_start.min(self.starts[j]);
            } else {
                self.est[j] = sub
                    .predecessors
                    .iter()
                    .map(|&p| self.est[p] + self.problem.subtasks()[p].duration)
                    .fold(info.ready, Period::max);
            }
            finish = finish.max(self.est[j] + sub.duration);
        }
        let makespan = if first_start == Period::MAX {
            info.min_makespan
        } else {
            info.min_makespan.max(finish.saturating_sub(first_start))
        };
        info.makespan_weight * f64::from(makespan)
            + info.lateness_weight * f64::from(finish.saturating_sub(info.deadline))
    }

    fn incumbent(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    fn fits_workers(&self, j: usize, s: Period) -> Result<(), Period> {
        let sub = &self.problem.subtasks()[j];
        for t in s..s + sub.duration {
            for &(p, n) in &sub.requirements {
                if self.remaining[self.cell(p, t)] < n {
                    return Err(t);
                }
            }
        }
        Ok(())
    }

    fn book(&mut self, j: usize, s: Period, release: bool) {
        let sub = &self.problem.subtasks()[j];
        for t in s..s + sub.duration {
            for &(p, n) in &sub.requirements {
                let c = self.cell(p, t);
                if release {
                    self.remaining[c] += n;
                } else {
                    self.remaining[c] -= n;
                }
            }
        }
    }

    fn bays_free(&self, (lo, hi): (Period, Period)) -> bool {
        let m = self.problem.num_bays();
        (lo..hi).all(|t| self.bays_used[t as usize] < m)
    }

    fn dfs(&mut self, k: usize, fixed: f64) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if k == self.order.len() {
            if fixed < self.incumbent() - EPS {
                self.best = Some((fixed, self.starts.clone()));
            }
            return;
        }
        let j = self.order[k];
        let task = self.problem.subtasks()[j].task;
        let bound = fixed + self.open_task_bound(task) + self.untouched_suffix[task + 1];
        if bound >= self.incumbent() - EPS {
            return;
        }

        let info = &self.problem.tasks()[task];
        let requires_bay = info.requires_bay;
        let last_of_task = *info.topo.last().expect("tasks are non-empty") == j;
        let sub = &self.problem.subtasks()[j];
        let duration = sub.duration;
        let mut s = sub
            .predecessors
            .iter()
            .map(|&p| self.starts[p] + self.problem.subtasks()[p].duration)
            .fold(info.ready, Period::max);

        while s + duration <= self.horizon {
            if let Err(t) = self.fits_workers(j, s) {
                s = t + 1;
                continue;
            }
            self.starts[j] = s;
            self.placed[j] = true;
            let interval = self.placed_interval(task).expect("just placed");
            if !requires_bay || self.bays_free(interval) {
                self.book(j, s, false);
                if last_of_task {
                    let cost = self.task_cost(task);
                    if requires_bay {
                        (interval.0..interval.1).for_each(|t| self.bays_used[t as usize] += 1);
                    }
                    self.dfs(k + 1, fixed + cost);
                    if requires_bay {
                        (interval.0..interval.1).for_each(|t| self.bays_used[t as usize] -= 1);
                    }
                } else {
                    self.dfs(k + 1, fixed);
                }
                self.book(j, s, true);
            }
            self.placed[j] = false;
            if self.exhausted {
                return;
            }
            s += 1;
        }
    }
}

/// Finds a provably optimal schedule, visiting at most `budget` nodes.
pub fn solve_exact(problem: &Problem, budget: u64) -> Result<ExactSolution, ExactError> {
    let mut search = Search::new(problem, budget);
    search.dfs(0, 0.0);
    let status = if search.exhausted {
        ExactStatus::BudgetExceeded
    } else {
        ExactStatus::Optimal
    };
    let Some((objective, starts)) = search.best else {
        return Err(if search.exhausted {
            ExactError::BudgetExceeded(budget)
        } else {
            ExactError::InfeasibleInstance
        });
    };
    let assignment = ScheduleAssignment::new(
        starts
            .iter()
            .enumerate()
            .map(|(j, &s)| (problem.subtask_id(j).to_string(), s))
            .collect(),
    );
    Ok(ExactSolution {
        assignment,
        objective,
        status,
        nodes: search.nodes,
    })
}
