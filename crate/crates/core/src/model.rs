//! Problem description: tasks, subtasks, worker roster and maintenance bays.
//!
//! [`Instance`] mirrors the JSON file format one-to-one. [`Problem`] is the
//! validated, index-based form that the decoder, the exact solver and the
//! genetic algorithm work on.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// A period index or a count of periods.
pub type Period = u32;

fn default_period_minutes() -> u32 {
    60
}

fn default_horizon() -> u32 {
    168
}

/// A full weekly scheduling problem as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    #[serde(default = "default_period_minutes")]
    pub period_minutes: u32,
    #[serde(default = "default_horizon")]
    pub horizon_periods: u32,
    pub num_bays: u32,
    pub worker_types: Vec<WorkerType>,
    /// Workers available per type, one entry per period.
    pub availability: IndexMap<String, Vec<u32>>,
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkerType {
    pub id: String,
    pub label: String,
}

/// One piece of equipment and its maintenance work orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub id: String,
    pub ready_time: Period,
    pub deadline: Period,
    pub requires_bay: bool,
    pub makespan_weight: f64,
    pub lateness_weight: f64,
    pub subtasks: Vec<Subtask>,
}

/// A single work order. Runs contiguously for `duration` periods and holds
/// the same head-count of each listed worker type for its whole run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subtask {
    pub id: String,
    pub duration: Period,
    #[serde(default)]
    pub requirements: IndexMap<String, u32>,
    #[serde(default)]
    pub predecessors: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValidationCode {
    EmptyInstance,
    InvalidHorizon,
    InvalidPeriodMinutes,
    DuplicateWorkerType,
    AvailabilityShape,
    DuplicateTask,
    EmptyTask,
    ReadyOutsideHorizon,
    ReadyAfterDeadline,
    InvalidWeight,
    DuplicateSubtask,
    InvalidDuration,
    UnknownWorkerType,
    InvalidRequirement,
    UnknownPredecessor,
    PrecedenceCycle,
}

impl ValidationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::EmptyInstance => "EMPTY_INSTANCE",
            Self::InvalidHorizon => "INVALID_HORIZON",
            Self::InvalidPeriodMinutes => "INVALID_PERIOD_MINUTES",
            Self::DuplicateWorkerType => "DUPLICATE_WORKER_TYPE",
            Self::AvailabilityShape => "AVAILABILITY_SHAPE",
            Self::DuplicateTask => "DUPLICATE_TASK",
            Self::EmptyTask => "EMPTY_TASK",
            Self::ReadyOutsideHorizon => "READY_OUTSIDE_HORIZON",
            Self::ReadyAfterDeadline => "READY_AFTER_DEADLINE",
            Self::InvalidWeight => "INVALID_WEIGHT",
            Self::DuplicateSubtask => "DUPLICATE_SUBTASK",
            Self::InvalidDuration => "INVALID_DURATION",
            Self::UnknownWorkerType => "UNKNOWN_WORKER_TYPE",
            Self::InvalidRequirement => "INVALID_REQUIREMENT",
            Self::UnknownPredecessor => "UNKNOWN_PREDECESSOR",
            Self::PrecedenceCycle => "PRECEDENCE_CYCLE",
        }
    }
}

impl fmt::Display for ValidationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationError {
    pub code: ValidationCode,
    pub message: String,
}

impl ValidationError {
    fn new(code: ValidationCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance: {}", join_errors(.0))]
    Invalid(Vec<ValidationError>),
    #[error("precedence cycle among the subtasks of task `{0}`")]
    Cycle(String),
}

impl ModelError {
    pub fn validation_errors(&self) -> &[ValidationError] {
        match self {
            Self::Invalid(errors) => errors,
            _ => &[],
        }
    }
}

fn join_errors(errors: &[ValidationError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Returns every invariant violation in `instance`. An empty list means the
/// instance is valid.
pub fn validate_instance(instance: &Instance) -> Vec<ValidationError> {
    use ValidationCode::*;
    let mut errors = Vec::new();
    let horizon = instance.horizon_periods;

    if instance.tasks.is_empty() {
        errors.push(ValidationError::new(EmptyInstance, "instance has no tasks"));
    }
    if horizon == 0 {
        errors.push(ValidationError::new(
            InvalidHorizon,
            "horizon_periods must be positive",
        ));
    }
    if instance.period_minutes == 0 {
        errors.push(ValidationError::new(
            InvalidPeriodMinutes,
            "period_minutes must be positive",
        ));
    }

    let mut types = HashSet::new();
    for wt in &instance.worker_types {
        if !types.insert(wt.id.as_str()) {
            errors.push(ValidationError::new(
                DuplicateWorkerType,
                format!("worker type `{}` declared more than once", wt.id),
            ));
        }
    }
    for wt in &instance.worker_types {
        match instance.availability.get(&wt.id) {
            None => errors.push(ValidationError::new(
                AvailabilityShape,
                format!("no availability row for worker type `{}`", wt.id),
            )),
            Some(row) if row.len() != horizon as usize => errors.push(ValidationError::new(
                AvailabilityShape,
                format!(
                    "availability row for `{}` has {} entries, expected {}",
                    wt.id,
                    row.len(),
                    horizon
                ),
            )),
            Some(_) => {}
        }
    }
    for key in instance.availability.keys() {
        if !types.contains(key.as_str()) {
            errors.push(ValidationError::new(
                AvailabilityShape,
                format!("availability row for undeclared worker type `{key}`"),
            ));
        }
    }

    let mut task_ids = HashSet::new();
    let mut owner: HashMap<&str, &str> = HashMap::new();
    for task in &instance.tasks {
        if !task_ids.insert(task.id.as_str()) {
            errors.push(ValidationError::new(
                DuplicateTask,
                format!("task `{}` declared more than once", task.id),
            ));
        }
        if task.subtasks.is_empty() {
            errors.push(ValidationError::new(
                EmptyTask,
                format!("task `{}` has no subtasks", task.id),
            ));
        }
        if task.ready_time >= horizon && horizon > 0 {
            errors.push(ValidationError::new(
                ReadyOutsideHorizon,
                format!(
                    "task `{}` ready time {} is outside the horizon of {} periods",
                    task.id, task.ready_time, horizon
                ),
            ));
        }
        if task.ready_time > task.deadline {
            errors.push(ValidationError::new(
                ReadyAfterDeadline,
                format!(
                    "task `{}` ready time {} is after its deadline {}",
                    task.id, task.ready_time, task.deadline
                ),
            ));
        }
        for (name, w) in [
            ("makespan_weight", task.makespan_weight),
            ("lateness_weight", task.lateness_weight),
        ] {
            if !w.is_finite() || w < 0.0 {
                errors.push(ValidationError::new(
                    InvalidWeight,
                    format!("task `{}` has invalid {name} {w}", task.id),
                ));
            }
        }

        let local: HashSet<&str> = task.subtasks.iter().map(|s| s.id.as_str()).collect();
        for sub in &task.subtasks {
            if let Some(prev) = owner.insert(sub.id.as_str(), task.id.as_str()) {
                errors.push(ValidationError::new(
                    DuplicateSubtask,
                    format!(
                        "subtask `{}` listed under task `{}` and task `{}`",
                        sub.id, prev, task.id
                    ),
                ));
            }
            if sub.duration == 0 || sub.duration > horizon {
                errors.push(ValidationError::new(
                    InvalidDuration,
                    format!(
                        "subtask `{}` duration {} not in 1..={}",
                        sub.id, sub.duration, horizon
                    ),
                ));
            }
            for (wt, &count) in &sub.requirements {
                if !types.contains(wt.as_str()) {
                    errors.push(ValidationError::new(
                        UnknownWorkerType,
                        format!(
                            "subtask `{}` requires undeclared worker type `{wt}`",
                            sub.id
                        ),
                    ));
                }
                if count == 0 {
                    errors.push(ValidationError::new(
                        InvalidRequirement,
                        format!("subtask `{}` requires zero workers of type `{wt}`", sub.id),
                    ));
                }
            }
            for pred in &sub.predecessors {
                if !local.contains(pred.as_str()) {
                    errors.push(ValidationError::new(
                        UnknownPredecessor,
                        format!(
                            "subtask `{}` has predecessor `{pred}` outside task `{}`",
                            sub.id, task.id
                        ),
                    ));
                }
            }
        }
        if local.len() == task.subtasks.len() && topological_order(task).is_none() {
            errors.push(ValidationError::new(
                PrecedenceCycle,
                format!("subtasks of task `{}` contain a precedence cycle", task.id),
            ));
        }
    }
    errors
}

/// Local predecessor lists for a task, ignoring references that leave the task.
fn local_predecessors(task: &Task) -> Vec<Vec<usize>> {
    let index: HashMap<&str, usize> = task
        .subtasks
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id.as_str(), i))
        .collect();
    task.subtasks
        .iter()
        .map(|s| {
            s.predecessors
                .iter()
                .filter_map(|p| index.get(p.as_str()).copied())
                .collect()
        })
        .collect()
}

/// Kahn's algorithm; among ready subtasks the earliest in input order goes
/// first. Returns `None` on a cycle.
pub(crate) fn topo_sort(preds: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = preds.len();
    let mut indegree: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut succs = vec![Vec::new(); n];
    for (j, ps) in preds.iter().enumerate() {
        for &p in ps {
            succs[p].push(j);
        }
    }
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&j| !done[j] && indegree[j] == 0)?;
        done[next] = true;
        order.push(next);
        for &s in &succs[next] {
            indegree[s] -= 1;
        }
    }
    Some(order)
}

fn topological_order(task: &Task) -> Option<Vec<usize>> {
    topo_sort(&local_predecessors(task))
}

/// Longest duration-weighted path through the precedence graph.
pub(crate) fn critical_path(durations: &[Period], preds: &[Vec<usize>], order: &[usize]) -> Period {
    let mut finish = vec![0; durations.len()];
    for &j in order {
        let start = preds[j].iter().map(|&p| finish[p]).max().unwrap_or(0);
        finish[j] = start + durations[j];
    }
    finish.into_iter().max().unwrap_or(0)
}

/// Shortest possible makespan of `task` with unlimited workers and bays: the
/// critical-path length of its precedence graph.
pub fn min_makespan(task: &Task) -> Result<Period, ModelError> {
    let preds = local_predecessors(task);
    let order = topo_sort(&preds).ok_or_else(|| ModelError::Cycle(task.id.clone()))?;
    let durations: Vec<Period> = task.subtasks.iter().map(|s| s.duration).collect();
    Ok(critical_path(&durations, &preds, &order))
}

/// Parses and validates an instance.
pub fn load_instance(text: &[u8]) -> Result<Instance, ModelError> {
    let instance: Instance = serde_json::from_slice(text).map_err(|e| ModelError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let errors = validate_instance(&instance);
    if errors.is_empty() {
        Ok(instance)
    } else {
        Err(ModelError::Invalid(errors))
    }
}

/// Canonical serialization: pretty JSON, keys in schema order, trailing newline.
pub fn save_instance(instance: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(instance).expect("instance serializes");
    text.push('\n');
    text
}

/// Hex SHA-256 of the canonical serialization.
pub fn instance_hash(instance: &Instance) -> String {
    let digest = Sha256::digest(save_instance(instance).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Task data in index form.
#[derive(Debug, Clone)]
pub struct TaskInfo {
    pub ready: Period,
    pub deadline: Period,
    pub requires_bay: bool,
    pub makespan_weight: f64,
    pub lateness_weight: f64,
    /// Global subtask indices owned by this task.
    pub subtasks: Range<usize>,
    /// Global subtask indices in placement order.
    pub topo: Vec<usize>,
    pub min_makespan: Period,
}

/// Subtask data in index form.
#[derive(Debug, Clone)]
pub struct SubtaskInfo {
    pub task: usize,
    pub duration: Period,
    /// `(worker type index, head-count)` pairs.
    pub requirements: Vec<(usize, u32)>,
    /// Global indices of predecessors.
    pub predecessors: Vec<usize>,
}

/// A validated instance compiled to dense indices.
///
/// Subtasks are numbered globally in file order: all subtasks of the first
/// task, then the second, and so on.
#[derive(Debug, Clone)]
pub struct Problem {
    instance: Instance,
    tasks: Vec<TaskInfo>,
    subtasks: Vec<SubtaskInfo>,
    availability: Vec<u32>,
    task_index: HashMap<String, usize>,
    subtask_index: HashMap<String, usize>,
}

impl Problem {
    pub fn new(instance: Instance) -> Result<Self, ModelError> {
        let errors = validate_instance(&instance);
        if !errors.is_empty() {
            return Err(ModelError::Invalid(errors));
        }
        let horizon = instance.horizon_periods as usize;
        let type_index: HashMap<&str, usize> = instance
            .worker_types
            .iter()
            .enumerate()
            .map(|(i, w)| (w.id.as_str(), i))
            .collect();
        let mut availability = vec![0; instance.worker_types.len() * horizon];
        for (p, wt) in instance.worker_types.iter().enumerate() {
            availability[p * horizon..(p + 1) * horizon]
                .copy_from_slice(&instance.availability[&wt.id]);
        }

        let mut tasks = Vec::with_capacity(instance.tasks.len());
        let mut subtasks = Vec::new();
        let mut task_index = HashMap::new();
        let mut subtask_index = HashMap::new();
        for (i, task) in instance.tasks.iter().enumerate() {
            task_index.insert(task.id.clone(), i);
            let base = subtasks.len();
            let preds = local_predecessors(task);
            let order = topo_sort(&preds).ok_or_else(|| ModelError::Cycle(task.id.clone()))?;
            let durations: Vec<Period> = task.subtasks.iter().map(|s| s.duration).collect();
            let min_makespan = critical_path(&durations, &preds, &order);
            for (local, sub) in task.subtasks.iter().enumerate() {
                subtask_index.insert(sub.id.clone(), base + local);
                subtasks.push(SubtaskInfo {
                    task: i,
                    duration: sub.duration,
                    requirements: sub
                        .requirements
                        .iter()
                        .map(|(wt, &n)| (type_index[wt.as_str()], n))
                        .collect(),
                    predecessors: preds[local].iter().map(|&p| base + p).collect(),
                });
            }
            tasks.push(TaskInfo {
                ready: task.ready_time,
                deadline: task.deadline,
                requires_bay: task.requires_bay,
                makespan_weight: task.makespan_weight,
                lateness_weight: task.lateness_weight,
                subtasks: base..subtasks.len(),
                topo: order.into_iter().map(|l| base + l).collect(),
                min_makespan,
            });
        }
        Ok(Self {
            instance,
            tasks,
            subtasks,
            availability,
            task_index,
            subtask_index,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn horizon(&self) -> Period {
        self.instance.horizon_periods
    }

    pub fn num_bays(&self) -> u32 {
        self.instance.num_bays
    }

    pub fn num_worker_types(&self) -> usize {
        self.instance.worker_types.len()
    }

    pub fn tasks(&self) -> &[TaskInfo] {
        &self.tasks
    }

    pub fn subtasks(&self) -> &[SubtaskInfo] {
        &self.subtasks
    }

    /// Flat availability matrix, row-major by worker type.
    pub fn availability(&self) -> &[u32] {
        &self.availability
    }

    pub fn available(&self, worker_type: usize, period: Period) -> u32 {
        self.availability[worker_type * self.horizon() as usize + period as usize]
    }

    pub fn task_id(&self, task: usize) -> &str {
        &self.instance.tasks[task].id
    }

    pub fn subtask_id(&self, subtask: usize) -> &str {
        let info = &self.subtasks[subtask];
        let task = &self.instance.tasks[info.task];
        &task.subtasks[subtask - self.tasks[info.task].subtasks.start].id
    }

    pub fn task_by_id(&self, id: &str) -> Option<usize> {
        self.task_index.get(id).copied()
    }

    pub fn subtask_by_id(&self, id: &str) -> Option<usize> {
        self.subtask_index.get(id).copied()
    }

    /// Σ f_i · min_makespan_i, the cost of a schedule where every task runs
    /// at its critical-path length and nothing is late.
    pub fn makespan_lower_bound(&self) -> f64 {
        self.tasks
            .iter()
            .map(|t| t.makespan_weight * f64::from(t.min_makespan))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::two_tasks;

    fn task(subtasks: Vec<Subtask>) -> Task {
        Task {
            id: "t".into(),
            ready_time: 0,
            deadline: 10,
            requires_bay: false,
            makespan_weight: 1.0,
            lateness_weight: 1.0,
            subtasks,
        }
    }

    fn sub(id: &str, duration: Period, preds: &[&str]) -> Subtask {
        Subtask {
            id: id.into(),
            duration,
            requirements: IndexMap::new(),
            predecessors: preds.iter().map(|p| p.to_string()).collect(),
        }
    }

    fn codes(instance: &Instance) -> Vec<ValidationCode> {
        validate_instance(instance)
            .into_iter()
            .map(|e| e.code)
            .collect()
    }

    #[test]
    fn two_tasks_is_valid() {
        assert!(validate_instance(&two_tasks()).is_empty());
    }

    #[test]
    fn duplicate_subtask_across_tasks() {
        let mut inst = two_tasks();
        inst.tasks[1].subtasks[0].id = inst.tasks[0].subtasks[0].id.clone();
        inst.tasks[1].subtasks[1].predecessors = vec![inst.tasks[0].subtasks[0].id.clone()];
        assert_eq!(codes(&inst), vec![ValidationCode::DuplicateSubtask]);
    }

    #[test]
    fn precedence_cycle() {
        let mut inst = two_tasks();
        inst.tasks[0].subtasks[0].predecessors = vec!["A2".into()];
        assert_eq!(codes(&inst), vec![ValidationCode::PrecedenceCycle]);
        assert!(matches!(
            min_makespan(&inst.tasks[0]),
            Err(ModelError::Cycle(_))
        ));
    }

    #[test]
    fn empty_instance() {
        let mut inst = two_tasks();
        inst.tasks.clear();
        assert_eq!(codes(&inst), vec![ValidationCode::EmptyInstance]);
    }

    #[test]
    fn misc_violations() {
        let mut inst = two_tasks();
        inst.availability.get_mut("worker").unwrap().pop();
        inst.tasks[0].subtasks[0].duration = 0;
        inst.tasks[0].subtasks[1]
            .requirements
            .insert("ghost".into(), 1);
        inst.tasks[1].ready_time = 50;
        inst.tasks[1].lateness_weight = -1.0;
        inst.tasks[1].subtasks[1].predecessors.push("A1".into());
        let got = codes(&inst);
        for code in [
            ValidationCode::AvailabilityShape,
            ValidationCode::InvalidDuration,
            ValidationCode::UnknownWorkerType,
            ValidationCode::ReadyOutsideHorizon,
            ValidationCode::InvalidWeight,
            ValidationCode::UnknownPredecessor,
        ] {
            assert!(got.contains(&code), "missing {code} in {got:?}");
        }
    }

    #[test]
    fn validation_is_pure() {
        let mut inst = two_tasks();
        inst.tasks[0].subtasks[0].duration = 0;
        let before = inst.clone();
        assert_eq!(validate_instance(&inst), validate_instance(&inst));
        assert_eq!(inst, before);
    }

    #[test]
    fn min_makespan_examples() {
        assert_eq!(
            min_makespan(&task(vec![sub("a", 1, &[]), sub("b", 2, &["a"])])).unwrap(),
            3
        );
        assert_eq!(
            min_makespan(&task(vec![sub("a", 2, &[]), sub("b", 3, &[])])).unwrap(),
            3
        );
        let diamond = task(vec![
            sub("a", 1, &[]),
            sub("b", 2, &["a"]),
            sub("c", 3, &["a"]),
            sub("d", 1, &["b", "c"]),
        ]);
        assert_eq!(min_makespan(&diamond).unwrap(), 5);
    }

    #[test]
    fn topo_order_breaks_ties_by_input_order() {
        let t = task(vec![
            sub("c", 1, &["b"]),
            sub("a", 1, &[]),
            sub("b", 1, &[]),
        ]);
        assert_eq!(topological_order(&t).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn two_tasks_file_loads() {
        let text = include_str!("../tests/data/two_tasks.json");
        let inst = load_instance(text.as_bytes()).unwrap();
        assert_eq!(inst.tasks.len(), 2);
        assert_eq!(
            inst.tasks.iter().map(|t| t.subtasks.len()).sum::<usize>(),
            4
        );
        assert_eq!(save_instance(&inst), text);
        assert_eq!(inst, two_tasks());
    }

    #[test]
    fn parse_error_reports_position() {
        let err = load_instance(b"{\n  \"num_bays\": 1,\n  oops\n}").unwrap_err();
        match err {
            ModelError::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_rejects_invalid() {
        let mut inst = two_tasks();
        inst.tasks.clear();
        let err = load_instance(save_instance(&inst).as_bytes()).unwrap_err();
        assert_eq!(
            err.validation_errors()[0].code,
            ValidationCode::EmptyInstance
        );
    }

    #[test]
    fn problem_indexes_two_tasks() {
        let p = Problem::new(two_tasks()).unwrap();
        assert_eq!(p.subtasks().len(), 4);
        assert_eq!(p.tasks()[1].subtasks, 2..4);
        assert_eq!(p.subtask_id(3), "B2");
        assert_eq!(p.subtasks()[3].predecessors, vec![2]);
        assert_eq!(p.makespan_lower_bound(), 6.0);
    }
}
