//! Schedule checking and scoring.
//!
//! Works directly on the string-keyed [`Instance`] and shares no placement
//! logic with the decoder, so each can be used to test the other.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{instance_hash, Instance, Period};

/// Start period of every subtask.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScheduleAssignment {
    pub starts: IndexMap<String, Period>,
}

impl ScheduleAssignment {
    pub fn new(starts: IndexMap<String, Period>) -> Self {
        Self { starts }
    }

    pub fn start(&self, subtask: &str) -> Option<Period> {
        self.starts.get(subtask).copied()
    }

    /// `[start, finish)` of every task: earliest subtask start to latest
    /// subtask end. Panics if a subtask has no start.
    pub fn task_intervals(&self, instance: &Instance) -> Vec<(Period, Period)> {
        instance
            .tasks
            .iter()
            .map(|task| {
                task.subtasks.iter().fold((Period::MAX, 0), |(lo, hi), s| {
                    let start = self.starts[&s.id];
                    (lo.min(start), hi.max(start + s.duration))
                })
            })
            .collect()
    }
}

/// How lateness enters the objective.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatenessMode {
    /// `max(0, finish - deadline)`.
    #[default]
    Clamped,
    /// `finish - deadline`, so early completion earns a credit.
    Signed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskMetrics {
    pub start: Period,
    pub finish: Period,
    pub makespan: Period,
    pub lateness: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleMetrics {
    pub objective: f64,
    pub per_task: IndexMap<String, TaskMetrics>,
}

impl ScheduleMetrics {
    /// Scores task intervals given in instance task order.
    pub fn from_intervals(
        instance: &Instance,
        intervals: &[(Period, Period)],
        mode: LatenessMode,
    ) -> Self {
        let mut objective = 0.0;
        let mut per_task = IndexMap::with_capacity(instance.tasks.len());
        for (task, &(start, finish)) in instance.tasks.iter().zip(intervals) {
            let makespan = finish - start;
            let raw = i64::from(finish) - i64::from(task.deadline);
            let lateness = match mode {
                LatenessMode::Clamped => raw.max(0),
                LatenessMode::Signed => raw,
            };
            objective +=
                task.makespan_weight * f64::from(makespan) + task.lateness_weight * lateness as f64;
            per_task.insert(
                task.id.clone(),
                TaskMetrics {
                    start,
                    finish,
                    makespan,
                    lateness,
                },
            );
        }
        Self {
            objective,
            per_task,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    Horizon,
    Precedence,
    ReadyTime,
    Bays,
    Workers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub kind: ViolationKind,
    /// Subtask id, worker type id, or `bays`.
    pub subject: String,
    pub period: Option<Period>,
    pub detail: String,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}", self.kind, self.subject)?;
        if let Some(t) = self.period {
            write!(f, " @{t}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("assignment names unknown subtask `{0}`")]
    UnknownSubtask(String),
    #[error("assignment has no start for subtask `{0}`")]
    MissingSubtask(String),
    #[error("schedule is infeasible ({} violations)", .0.len())]
    Infeasible(Vec<ConstraintViolation>),
}

/// Lists every broken constraint. An empty list means the schedule is feasible.
pub fn check_schedule(
    instance: &Instance,
    assignment: &ScheduleAssignment,
) -> Result<Vec<ConstraintViolation>, EvalError> {
    let mut known = HashMap::new();
    for task in &instance.tasks {
        for sub in &task.subtasks {
            known.insert(sub.id.as_str(), ());
        }
    }
    if let Some(id) = assignment
        .starts
        .keys()
        .find(|k| !known.contains_key(k.as_str()))
    {
        return Err(EvalError::UnknownSubtask(id.clone()));
    }
    for task in &instance.tasks {
        for sub in &task.subtasks {
            if !assignment.starts.contains_key(&sub.id) {
                return Err(EvalError::MissingSubtask(sub.id.clone()));
            }
        }
    }

    let horizon = instance.horizon_periods;
    let mut violations = Vec::new();
    let mut usage: HashMap<&str, Vec<u32>> = instance
        .worker_types
        .iter()
        .map(|w| (w.id.as_str(), vec![0; horizon as usize]))
        .collect();
    let mut bays = vec![Vec::new(); horizon as usize];

    for (task, &(t_start, t_finish)) in instance
        .tasks
        .iter()
        .zip(&assignment.task_intervals(instance))
    {
        let durations: HashMap<&str, Period> = task
            .subtasks
            .iter()
            .map(|s| (s.id.as_str(), s.duration))
            .collect();
        for sub in &task.subtasks {
            let start = assignment.starts[&sub.id];
            let end = start + sub.duration;
            if end > horizon {
                violations.push(ConstraintViolation {
                    kind: ViolationKind::Horizon,
                    subject: sub.id.clone(),
                    period: Some(start),
                    detail: format!("ends at {end}, past the horizon of {horizon}"),
                });
            }
            if start < task.ready_time {
                violations.push(ConstraintViolation {
                    kind: ViolationKind::ReadyTime,
                    subject: sub.id.clone(),
                    period: Some(start),
                    detail: format!(
                        "starts before task `{}` is ready at {}",
                        task.id, task.ready_time
                    ),
                });
            }
            for pred in &sub.predecessors {
                let pred_end = assignment.starts[pred] + durations[pred.as_str()];
                if start < pred_end {
                    violations.push(ConstraintViolation {
                        kind: ViolationKind::Precedence,
                        subject: sub.id.clone(),
                        period: Some(start),
                        detail: format!("predecessor `{pred}` runs until {pred_end}"),
                    });
                }
            }
            for (wt, &count) in &sub.requirements {
                if let Some(row) = usage.get_mut(wt.as_str()) {
                    for t in start..end.min(horizon) {
                        row[t as usize] += count;
                    }
                }
            }
        }
        if task.requires_bay {
            for t in t_start..t_finish.min(horizon) {
                bays[t as usize].push(task.id.as_str());
            }
        }
    }

    for (t, occupants) in bays.iter().enumerate() {
        if occupants.len() > instance.num_bays as usize {
            violations.push(ConstraintViolation {
                kind: ViolationKind::Bays,
                subject: "bays".into(),
                period: Some(t as Period),
                detail: format!(
                    "{} bay tasks open ({}), {} bays",
                    occupants.len(),
                    occupants.join(", "),
                    instance.num_bays
                ),
            });
        }
    }
    for wt in &instance.worker_types {
        let row = &usage[wt.id.as_str()];
        let available = &instance.availability[&wt.id];
        for (t, (&used, &cap)) in row.iter().zip(available).enumerate() {
            if used > cap {
                violations.push(ConstraintViolation {
                    kind: ViolationKind::Workers,
                    subject: wt.id.clone(),
                    period: Some(t as Period),
                    detail: format!("{used} required, {cap} available"),
                });
            }
        }
    }
    Ok(violations)
}

/// Scores a feasible schedule with clamped lateness.
pub fn compute_metrics(
    instance: &Instance,
    assignment: &ScheduleAssignment,
) -> Result<ScheduleMetrics, EvalError> {
    compute_metrics_with(instance, assignment, LatenessMode::Clamped)
}

pub fn compute_metrics_with(
    instance: &Instance,
    assignment: &ScheduleAssignment,
    mode: LatenessMode,
) -> Result<ScheduleMetrics, EvalError> {
    let violations = check_schedule(instance, assignment)?;
    if !violations.is_empty() {
        return Err(EvalError::Infeasible(violations));
    }
    Ok(ScheduleMetrics::from_intervals(
        instance,
        &assignment.task_intervals(instance),
        mode,
    ))
}

/// The schedule file: which instance, when each subtask starts, and its score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDocument {
    pub instance_hash: String,
    pub starts: ScheduleAssignment,
    pub metrics: ScheduleMetrics,
}

impl ScheduleDocument {
    pub fn new(
        instance: &Instance,
        assignment: ScheduleAssignment,
        metrics: ScheduleMetrics,
    ) -> Self {
        Self {
            instance_hash: instance_hash(instance),
            starts: assignment,
            metrics,
        }
    }
}
