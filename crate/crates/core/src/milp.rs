//! Time-indexed MILP export in LP format, and import of solver solutions.
//!
//! Variables, for subtask `j`, task `i` and period `t`:
//!
//! | name                 | meaning                                  |
//! |----------------------|------------------------------------------|
//! | `xs_{j}_{t}`         | subtask `j` starts in period `t`         |
//! | `xi_{i}_{t}`         | task `i` is open in period `t`           |
//! | `xistart_{i}_{t}`    | task `i` opens in period `t`             |
//! | `xifinish_{i}_{t}`   | task `i` closes at period `t` (exclusive)|
//! | `ymk_{i}`            | makespan of task `i`                     |
//! | `ylt_{i}`            | lateness of task `i`                     |
//!
//! `xifinish` runs over `0..=horizon` so a task ending exactly at the
//! horizon has a finish period. The open-indicator recurrence uses an
//! implicit zero before period 0.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluator::{
    compute_metrics_with, ConstraintViolation, EvalError, LatenessMode, ScheduleAssignment,
    ScheduleMetrics,
};
use crate::model::{Period, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MilpMode {
    /// The base formulation: no ready-time rows, lateness unbounded below.
    Literal,
    /// Adds `start >= ready time` for every subtask and `ylt >= 0`, matching
    /// the evaluator.
    Amended,
}

impl MilpMode {
    pub fn lateness_mode(self) -> LatenessMode {
        match self {
            Self::Literal => LatenessMode::Signed,
            Self::Amended => LatenessMode::Clamped,
        }
    }
}

impl FromStr for MilpMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "literal" => Ok(Self::Literal),
            "amended" => Ok(Self::Amended),
            other => Err(format!("unknown MILP mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MilpOptions {
    pub mode: MilpMode,
    pub max_variables: usize,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self {
            mode: MilpMode::Amended,
            max_variables: 5_000_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum MilpError {
    #[error(
        "model would have {variables} variables ({binaries} binary), above the cap of {limit}"
    )]
    TooLarge {
        variables: usize,
        binaries: usize,
        limit: usize,
    },
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("NOT_INTEGRAL: `{name}` = {value}")]
    NotIntegral { name: String, value: f64 },
    #[error("imported schedule is infeasible: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Infeasible(Vec<ConstraintViolation>),
    #[error(transparent)]
    Eval(EvalError),
}

/// `(binary, total)` variable counts.
pub fn count_variables(problem: &Problem) -> (usize, usize) {
    let h = problem.horizon() as usize;
    let tasks = problem.tasks().len();
    let binaries = problem.subtasks().len() * h + tasks * (3 * h + 1);
    (binaries, binaries + 2 * tasks)
}

const MAX_LINE: usize = 254;

/// Accumulates one LP section, wrapping long rows onto continuation lines.
struct LpWriter {
    out: String,
    line: String,
}

impl LpWriter {
    fn new() -> Self {
        Self {
            out: String::new(),
            line: String::new(),
        }
    }

    fn raw(&mut self, s: &str) {
        self.flush();
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn token(&mut self, tok: &str) {
        if !self.line.is_empty() && self.line.len() + 1 + tok.len() > MAX_LINE {
            self.flush();
            self.line.push_str("   ");
        }
        if !self.line.is_empty() && !self.line.ends_with(' ') {
            self.line.push(' ');
        }
        self.line.push_str(tok);
    }

    fn flush(&mut self) {
        if !self.line.is_empty() {
            self.out.push_str(&self.line);
            self.out.push('\n');
            self.line.clear();
        }
    }

    fn terms(&mut self, terms: &[(f64, String)]) {
        for (k, (coef, var)) in terms.iter().enumerate() {
            let sign = if *coef < 0.0 { "-" } else { "+" };
            let mag = coef.abs();
            if k > 0 || *coef < 0.0 {
                self.token(sign);
            }
            if mag != 1.0 {
                self.token(&fmt_num(mag));
            }
            self.token(var);
        }
    }

    fn row(&mut self, name: &str, terms: &[(f64, String)], sense: &str, rhs: f64) {
        self.line.push(' ');
        self.token(&format!("{name}:"));
        if terms.is_empty() {
            self.token("0");
        } else {
            self.terms(terms);
        }
        self.token(sense);
        self.token(&fmt_num(rhs));
        self.flush();
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

fn xs(problem: &Problem, j: usize, t: Period) -> String {
    format!("xs_{}_{t}", problem.subtask_id(j))
}

fn task_var(prefix: &str, problem: &Problem, i: usize, t: Period) -> String {
    format!("{prefix}_{}_{t}", problem.task_id(i))
}

/// `Σ_t coef·t·var_t`, skipping the zero term at t = 0.
fn weighted(coef: f64, horizon: Period, name: impl Fn(Period) -> String) -> Vec<(f64, String)> {
    (1..horizon)
        .map(|t| (coef * f64::from(t), name(t)))
        .collect()
}

/// Writes the model as LP text.
pub fn emit_milp(problem: &Problem, options: &MilpOptions) -> Result<String, MilpError> {
    let (binaries, variables) = count_variables(problem);
    if variables > options.max_variables {
        return Err(MilpError::TooLarge {
            variables,
            binaries,
            limit: options.max_variables,
        });
    }
    let h = problem.horizon();
    let amended = options.mode == MilpMode::Amended;
    let mut w = LpWriter::new();

    w.raw(&format!(
        "\\ weekly maintenance schedule, {} tasks, {} subtasks, {} periods, {} mode",
        problem.tasks().len(),
        problem.subtasks().len(),
        h,
        if amended { "amended" } else { "literal" }
    ));
    w.raw("Minimize");
    let objective: Vec<(f64, String)> = problem
        .tasks()
        .iter()
        .enumerate()
        .flat_map(|(i, t)| {
            [
                (t.makespan_weight, format!("ymk_{}", problem.task_id(i))),
                (t.lateness_weight, format!("ylt_{}", problem.task_id(i))),
            ]
        })
        .collect();
    w.line.push(' ');
    w.token("obj:");
    w.terms(&objective);
    w.flush();

    w.raw("Subject To");
    for (j, sub) in problem.subtasks().iter().enumerate() {
        let id = problem.subtask_id(j);
        let once: Vec<_> = (0..h).map(|t| (1.0, xs(problem, j, t))).collect();
        w.row(&format!("one_start_{id}"), &once, "=", 1.0);
        w.row(
            &format!("in_horizon_{id}"),
            &weighted(1.0, h, |t| xs(problem, j, t)),
            "<=",
            f64::from(h) - f64::from(sub.duration),
        );
        for &k in &sub.predecessors {
            let mut terms = weighted(1.0, h, |t| xs(problem, j, t));
            terms.extend(weighted(-1.0, h, |t| xs(problem, k, t)));
            w.row(
                &format!("prec_{id}_{}", problem.subtask_id(k)),
                &terms,
                ">=",
                f64::from(problem.subtasks()[k].duration),
            );
        }
        if amended {
            let ready = problem.tasks()[sub.task].ready;
            w.row(
                &format!("ready_{id}"),
                &weighted(1.0, h, |t| xs(problem, j, t)),
                ">=",
                f64::from(ready),
            );
        }
    }

    for (i, task) in problem.tasks().iter().enumerate() {
        let tid = problem.task_id(i);
        let ymk = format!("ymk_{tid}");
        let ylt = format!("ylt_{tid}");
        let start = |c| weighted(c, h, |t| task_var("xistart", problem, i, t));
        let finish = |c: f64| -> Vec<(f64, String)> {
            (1..=h)
                .map(|t| (c * f64::from(t), task_var("xifinish", problem, i, t)))
                .collect()
        };

        let once: Vec<_> = (0..h)
            .map(|t| (1.0, task_var("xistart", problem, i, t)))
            .collect();
        w.row(&format!("task_one_start_{tid}"), &once, "=", 1.0);
        for j in task.subtasks.clone() {
            let sid = problem.subtask_id(j);
            let mut terms = start(1.0);
            terms.extend(weighted(-1.0, h, |t| xs(problem, j, t)));
            w.row(&format!("task_start_{tid}_{sid}"), &terms, "<=", 0.0);

            let mut terms = start(1.0);
            terms.push((1.0, ymk.clone()));
            terms.extend(weighted(-1.0, h, |t| xs(problem, j, t)));
            w.row(
                &format!("task_makespan_{tid}_{sid}"),
                &terms,
                ">=",
                f64::from(problem.subtasks()[j].duration),
            );
        }
        let once: Vec<_> = (0..=h)
            .map(|t| (1.0, task_var("xifinish", problem, i, t)))
            .collect();
        w.row(&format!("task_one_finish_{tid}"), &once, "=", 1.0);

        let mut terms = finish(1.0);
        terms.extend(start(-1.0));
        terms.push((-1.0, ymk.clone()));
        w.row(&format!("task_finish_{tid}"), &terms, ">=", 0.0);

        let mut terms = vec![(1.0, ylt.clone())];
        terms.extend(finish(-1.0));
        w.row(
            &format!("task_lateness_{tid}"),
            &terms,
            ">=",
            -f64::from(task.deadline),
        );

        for t in 0..h {
            let mut terms = vec![(1.0, task_var("xi", problem, i, t))];
            if t > 0 {
                terms.push((-1.0, task_var("xi", problem, i, t - 1)));
            }
            terms.push((-1.0, task_var("xistart", problem, i, t)));
            terms.push((1.0, task_var("xifinish", problem, i, t)));
            w.row(&format!("task_open_{tid}_{t}"), &terms, "=", 0.0);
        }
    }

    let bay_tasks: Vec<usize> = (0..problem.tasks().len())
        .filter(|&i| problem.tasks()[i].requires_bay)
        .collect();
    if !bay_tasks.is_empty() {
        for t in 0..h {
            let terms: Vec<_> = bay_tasks
                .iter()
                .map(|&i| (1.0, task_var("xi", problem, i, t)))
                .collect();
            w.row(
                &format!("bays_{t}"),
                &terms,
                "<=",
                f64::from(problem.num_bays()),
            );
        }
    }

    for (p, wt) in problem.instance().worker_types.iter().enumerate() {
        let users: Vec<(usize, u32)> = problem
            .subtasks()
            .iter()
            .enumerate()
            .flat_map(|(j, s)| {
                s.requirements
                    .iter()
                    .filter(move |&&(q, _)| q == p)
                    .map(move |&(_, n)| (j, n))
            })
            .collect();
        if users.is_empty() {
            continue;
        }
        for t in 0..h {
            let mut terms = Vec::new();
            for &(j, n) in &users {
                let d = problem.subtasks()[j].duration;
                let first = (t + 1).saturating_sub(d);
                for s in first..=t {
                    terms.push((f64::from(n), xs(problem, j, s)));
                }
            }
            w.row(
                &format!("workers_{}_{t}", wt.id),
                &terms,
                "<=",
                f64::from(problem.available(p, t)),
            );
        }
    }

    w.raw("Bounds");
    for i in 0..problem.tasks().len() {
        let tid = problem.task_id(i);
        w.raw(&format!(" ymk_{tid} free"));
        if amended {
            w.raw(&format!(" ylt_{tid} >= 0"));
        } else {
            w.raw(&format!(" ylt_{tid} free"));
        }
    }

    w.raw("Binaries");
    for j in 0..problem.subtasks().len() {
        for t in 0..h {
            w.token(&xs(problem, j, t));
        }
        w.flush();
    }
    for i in 0..problem.tasks().len() {
        for prefix in ["xi", "xistart"] {
            for t in 0..h {
                w.token(&task_var(prefix, problem, i, t));
            }
            w.flush();
        }
        for t in 0..=h {
            w.token(&task_var("xifinish", problem, i, t));
        }
        w.flush();
    }
    w.raw("End");
    Ok(w.out)
}

/// Variable values implied by a schedule. Binaries at zero are omitted.
pub fn assignment_values(
    problem: &Problem,
    assignment: &ScheduleAssignment,
    mode: MilpMode,
) -> IndexMap<String, f64> {
    let mut values = IndexMap::new();
    for j in 0..problem.subtasks().len() {
        values.insert(
            xs(problem, j, assignment.starts[problem.subtask_id(j)]),
            1.0,
        );
    }
    for (i, (lo, hi)) in assignment
        .task_intervals(problem.instance())
        .into_iter()
        .enumerate()
    {
        let task = &problem.tasks()[i];
        let tid = problem.task_id(i);
        values.insert(task_var("xistart", problem, i, lo), 1.0);
        values.insert(task_var("xifinish", problem, i, hi), 1.0);
        for t in lo..hi {
            values.insert(task_var("xi", problem, i, t), 1.0);
        }
        values.insert(format!("ymk_{tid}"), f64::from(hi - lo));
        let late = f64::from(hi) - f64::from(task.deadline);
        let late = match mode {
            MilpMode::Amended => late.max(0.0),
            MilpMode::Literal => late,
        };
        values.insert(format!("ylt_{tid}"), late);
    }
    values
}

/// Solution text: an objective comment followed by `name value` lines.
pub fn render_solution(values: &IndexMap<String, f64>, objective: f64) -> String {
    let mut out = format!("# Objective value = {objective}\n");
    for (name, v) in values {
        let _ = writeln!(out, "{name} {v}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub external_objective: Option<f64>,
    pub evaluator_objective: f64,
    pub difference: Option<f64>,
    /// `None` when the solution carries no objective to compare.
    pub within_tolerance: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImportedSolution {
    pub assignment: ScheduleAssignment,
    pub metrics: ScheduleMetrics,
    pub parity: ParityReport,
}

pub const INTEGRALITY_TOLERANCE: f64 = 1e-4;
pub const PARITY_TOLERANCE: f64 = 1e-6;

enum VarRef {
    SubtaskStart(usize, Period),
    TaskBinary,
    Makespan(usize),
    Lateness(usize),
}

fn classify(problem: &Problem, name: &str) -> Option<VarRef> {
    let split = |rest: &str| -> Option<(String, Period)> {
        let (id, t) = rest.rsplit_once('_')?;
        Some((id.to_string(), t.parse().ok()?))
    };
    let h = problem.horizon();
    if let Some(rest) = name.strip_prefix("xs_") {
        let (id, t) = split(rest)?;
        let j = problem.subtask_by_id(&id)?;
        return (t < h).then_some(VarRef::SubtaskStart(j, t));
    }
    for (prefix, limit) in [("xistart_", h), ("xifinish_", h + 1), ("xi_", h)] {
        if let Some(rest) = name.strip_prefix(prefix) {
            let (id, t) = split(rest)?;
            problem.task_by_id(&id)?;
            return (t < limit).then_some(VarRef::TaskBinary);
        }
    }
    if let Some(id) = name.strip_prefix("ymk_") {
        return problem.task_by_id(id).map(VarRef::Makespan);
    }
    if let Some(id) = name.strip_prefix("ylt_") {
        return problem.task_by_id(id).map(VarRef::Lateness);
    }
    None
}

/// Rebuilds a schedule from solver output (`name value` per line, `#`
/// comments, an optional `# Objective value = X` header) and compares the
/// solver's objective with the evaluator's.
pub fn import_solution(
    problem: &Problem,
    text: &str,
    mode: MilpMode,
) -> Result<ImportedSolution, MilpError> {
    let mut header_objective = None;
    let mut starts: Vec<Option<Period>> = vec![None; problem.subtasks().len()];
    let mut makespans = vec![None; problem.tasks().len()];
    let mut lateness = vec![None; problem.tasks().len()];

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim().eq_ignore_ascii_case("objective value") {
                    header_objective = value.trim().parse::<f64>().ok();
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(MilpError::Parse(format!(
                "line {}: expected `name value`",
                lineno + 1
            )));
        };
        let value: f64 = value
            .parse()
            .map_err(|_| MilpError::Parse(format!("line {}: bad value `{value}`", lineno + 1)))?;
        let var = classify(problem, name).ok_or_else(|| {
            MilpError::Parse(format!("line {}: unknown variable `{name}`", lineno + 1))
        })?;
        let binary = |value: f64| -> Result<bool, MilpError> {
            if value.abs() <= INTEGRALITY_TOLERANCE {
                Ok(false)
            } else if (value - 1.0).abs() <= INTEGRALITY_TOLERANCE {
                Ok(true)
            } else {
                Err(MilpError::NotIntegral {
                    name: name.to_string(),
                    value,
                })
            }
        };
        match var {
            VarRef::SubtaskStart(j, t) => {
                if binary(value)? {
                    if let Some(prev) = starts[j].replace(t) {
                        return Err(MilpError::Parse(format!(
                            "subtask `{}` starts at both {prev} and {t}",
                            problem.subtask_id(j)
                        )));
                    }
                }
            }
            VarRef::TaskBinary => {
                binary(value)?;
            }
            VarRef::Makespan(i) => makespans[i] = Some(value),
            VarRef::Lateness(i) => lateness[i] = Some(value),
        }
    }

    let mut map = IndexMap::with_capacity(starts.len());
    for (j, s) in starts.into_iter().enumerate() {
        let s = s.ok_or_else(|| {
            MilpError::Parse(format!(
                "no start variable set for subtask `{}`",
                problem.subtask_id(j)
            ))
        })?;
        map.insert(problem.subtask_id(j).to_string(), s);
    }
    let assignment = ScheduleAssignment::new(map);
    let metrics = compute_metrics_with(problem.instance(), &assignment, mode.lateness_mode())
        .map_err(|e| match e {
            EvalError::Infeasible(v) => MilpError::Infeasible(v),
            other => MilpError::Eval(other),
        })?;

    let from_y = || -> Option<f64> {
        problem
            .tasks()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                Some(t.makespan_weight * makespans[i]? + t.lateness_weight * lateness[i]?)
            })
            .sum()
    };
    let external = header_objective.or_else(from_y);
    let difference = external.map(|e| (e - metrics.objective).abs());
    let parity = ParityReport {
        external_objective: external,
        evaluator_objective: metrics.objective,
        difference,
        within_tolerance: difference.map(|d| d <= PARITY_TOLERANCE),
    };
    Ok(ImportedSolution {
        assignment,
        metrics,
        parity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(f64, String)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LpRow {
    pub fn lhs(&self, values: &HashMap<String, f64>) -> f64 {
        self.terms
            .iter()
            .map(|(c, v)| c * values.get(v).copied().unwrap_or(0.0))
            .sum()
    }

    pub fn satisfied(&self, values: &HashMap<String, f64>, tol: f64) -> bool {
        let lhs = self.lhs(values);
        match self.sense {
            Sense::Le => lhs <= self.rhs + tol,
            Sense::Ge => lhs >= self.rhs - tol,
            Sense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

/// A parsed LP file in the subset [`emit_milp`] writes.
#[derive(Debug, Clone, Default)]
pub struct LpModel {
    pub objective: Vec<(f64, String)>,
    pub rows: Vec<LpRow>,
    /// Variables with a lower bound of minus infinity.
    pub free: HashSet<String>,
    pub binaries: HashSet<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Objective,
    Constraints,
    Bounds,
    Binaries,
}

fn parse_terms(tokens: &[&str]) -> Result<Vec<(f64, String)>, MilpError> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef = None;
    for &tok in tokens {
        match tok {
            "+" => sign = 1.0,
            "-" => sign = -1.0,
            _ => {
                if let Ok(x) = tok.parse::<f64>() {
                    coef = Some(x);
                } else {
                    terms.push((sign * coef.take().unwrap_or(1.0), tok.to_string()));
                    sign = 1.0;
                }
            }
        }
    }
    Ok(terms)
}

impl LpModel {
    pub fn parse(text: &str) -> Result<Self, MilpError> {
        let mut model = Self::default();
        let mut section = Section::None;
        let mut pending: Vec<&str> = Vec::new();
        let err = |msg: String| MilpError::Parse(msg);

        let finish_row = |tokens: &mut Vec<&str>, model: &mut LpModel| -> Result<(), MilpError> {
            if tokens.is_empty() {
                return Ok(());
            }
            let name = tokens[0]
                .strip_suffix(':')
                .ok_or_else(|| err(format!("row without a name: {}", tokens.join(" "))))?;
            let n = tokens.len();
            if n < 3 {
                return Err(err(format!("truncated row `{name}`")));
            }
            let sense = match tokens[n - 2] {
                "<=" => Sense::Le,
                ">=" => Sense::Ge,
                "=" => Sense::Eq,
                other => return Err(err(format!("row `{name}` has sense `{other}`"))),
            };
            let rhs = tokens[n - 1]
                .parse()
                .map_err(|_| err(format!("row `{name}` has rhs `{}`", tokens[n - 1])))?;
            let terms = parse_terms(&tokens[1..n - 2])?;
            model.rows.push(LpRow {
                name: name.to_string(),
                terms,
                sense,
                rhs,
            });
            tokens.clear();
            Ok(())
        };

        for line in text.lines() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('\\') {
                continue;
            }
            let next = match trimmed.to_ascii_lowercase().as_str() {
                "minimize" => Some(Section::Objective),
                "subject to" => Some(Section::Constraints),
                "bounds" => Some(Section::Bounds),
                "binaries" => Some(Section::Binaries),
                "end" => Some(Section::None),
                _ => None,
            };
            if let Some(next) = next {
                finish_row(&mut pending, &mut model)?;
                section = next;
                continue;
            }
            match section {
                Section::None => return Err(err(format!("text outside a section: `{trimmed}`"))),
                Section::Objective => {
                    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
                    let body = match tokens.first() {
                        Some(t) if t.ends_with(':') => &tokens[1..],
                        _ => &tokens[..],
                    };
                    model.objective.extend(parse_terms(body)?);
                }
                Section::Constraints => {
                    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
                    if tokens[0].ends_with(':') {
                        finish_row(&mut pending, &mut model)?;
                    }
                    pending.extend(tokens);
                }
                Section::Bounds => {
                    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
                    match tokens.as_slice() {
                        [v, "free"] => {
                            model.free.insert(v.to_string());
                        }
                        [_, ">=", "0"] => {}
                        _ => return Err(err(format!("unsupported bound `{trimmed}`"))),
                    }
                }
                Section::Binaries => {
                    model
                        .binaries
                        .extend(trimmed.split_whitespace().map(str::to_string));
                }
            }
        }
        finish_row(&mut pending, &mut model)?;
        Ok(model)
    }

    /// Names of rows, bounds and integrality conditions that `values`
    /// breaks. Unlisted variables are zero.
    pub fn violations(&self, values: &HashMap<String, f64>, tol: f64) -> Vec<String> {
        let mut out: Vec<String> = self
            .rows
            .iter()
            .filter(|r| !r.satisfied(values, tol))
            .map(|r| r.name.clone())
            .collect();
        for (name, &v) in values {
            if self.binaries.contains(name) {
                if v.abs() > tol && (v - 1.0).abs() > tol {
                    out.push(format!("binary {name}"));
                }
            } else if !self.free.contains(name) && v < -tol {
                out.push(format!("bound {name}"));
            }
        }
        out.sort();
        out
    }

    pub fn objective_value(&self, values: &HashMap<String, f64>) -> f64 {
        self.objective
            .iter()
            .map(|(c, v)| c * values.get(v).copied().unwrap_or(0.0))
            .sum()
    }
}
