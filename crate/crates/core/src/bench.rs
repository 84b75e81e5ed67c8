//! Batch experiments: optimality gaps, method comparisons and Gantt charts.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoder::{decode, DecodeOutcome};
use crate::evaluator::{check_schedule, EvalError, ScheduleAssignment};
use crate::exact::{lower_bound, solve_exact, ExactStatus};
use crate::ga::{ready_time_order, run_ga, FitnessKind, GaConfig};
use crate::model::{Instance, ModelError, Problem};
use crate::scenario::{Scenario, WorkerTightness};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("bound must be positive, got {0}")]
    NonPositiveBound(f64),
    #[error("cost {cost} is below the bound {bound}")]
    CostBelowBound { cost: f64, bound: f64 },
    #[error("scenario `{id}`: {source}")]
    Instance { id: String, source: ModelError },
    #[error("EMPTY_INSTANCE: nothing to draw")]
    EmptyInstance,
    #[error("cannot draw an infeasible schedule ({0} violations)")]
    Infeasible(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `cost / bound - 1`.
pub fn optimality_gap(cost: f64, bound: f64) -> Result<f64, BenchError> {
    if bound <= 0.0 || bound.is_nan() {
        return Err(BenchError::NonPositiveBound(bound));
    }
    if cost < bound {
        return Err(BenchError::CostBelowBound { cost, bound });
    }
    Ok(cost / bound - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    GaLinear,
    GaInverse,
    HeuristicReadySort,
    Exact,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::GaLinear,
        Method::GaInverse,
        Method::HeuristicReadySort,
        Method::Exact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::GaLinear => "GA_LINEAR",
            Self::GaInverse => "GA_INVERSE",
            Self::HeuristicReadySort => "HEURISTIC_READY_SORT",
            Self::Exact => "EXACT",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "GA_LINEAR" | "GA1" => Ok(Self::GaLinear),
            "GA_INVERSE" | "GA2" => Ok(Self::GaInverse),
            "HEURISTIC_READY_SORT" | "HEURISTIC" => Ok(Self::HeuristicReadySort),
            "EXACT" => Ok(Self::Exact),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// GA settings; each scenario runs with `seed + scenario position`, the
    /// same for both fitness functions.
    pub ga: GaConfig,
    pub exact_budget: u64,
    /// EXACT is skipped on instances with more subtasks than this.
    pub exact_max_subtasks: usize,
    /// When false, `wall_ms` is written as 0 so reports are byte-stable.
    pub record_wall_time: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ga: GaConfig::default(),
            exact_budget: 20_000_000,
            exact_max_subtasks: 10,
            record_wall_time: true,
        }
    }
}

/// One instance to benchmark, with its grid coordinates when known.
#[derive(Debug, Clone)]
pub struct BenchScenario {
    pub id: String,
    pub deadline_tightness: Option<f64>,
    pub worker_tightness: Option<WorkerTightness>,
    pub instance: Instance,
}

impl From<Scenario> for BenchScenario {
    fn from(s: Scenario) -> Self {
        Self {
            id: s.name(),
            deadline_tightness: Some(s.deadline_tightness),
            worker_tightness: Some(s.worker_tightness),
            instance: s.instance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    LowerBound,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::LowerBound => "lower_bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub scenario_id: String,
    pub deadline_tightness: Option<f64>,
    pub worker_tightness: Option<WorkerTightness>,
    pub method: Method,
    pub objective: Option<f64>,
    pub bound: f64,
    pub bound_kind: BoundKind,
    pub gap: Option<f64>,
    pub feasible: bool,
    pub wall_ms: u64,
    pub seed: u64,
}

/// Aggregates for one (deadline tightness, worker tightness, method) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub deadline_tightness: Option<f64>,
    pub worker_tightness: Option<WorkerTightness>,
    pub method: Method,
    pub runs: usize,
    pub feasible: usize,
    pub mean_gap: Option<f64>,
    /// Mean over scenarios of `cost / cost(GA_LINEAR) - 1`.
    pub mean_deficit_vs_ga_linear: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: Vec<CellSummary>,
}

pub const CSV_HEADER: [&str; 11] = [
    "scenario_id",
    "pi",
    "worker_tightness",
    "method",
    "objective",
    "bound",
    "bound_kind",
    "gap",
    "feasible",
    "wall_ms",
    "seed",
];

const SUMMARY_HEADER: [&str; 7] = [
    "pi",
    "worker_tightness",
    "method",
    "runs",
    "feasible",
    "mean_gap",
    "mean_deficit_vs_ga_linear",
];

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn write_csv(header: &[&str], records: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // writes into memory cannot fail
    w.write_record(header).expect("in-memory write");
    for record in records {
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        write_csv(
            &CSV_HEADER,
            self.rows.iter().map(|r| {
                vec![
                    r.scenario_id.clone(),
                    opt(r.deadline_tightness),
                    opt(r.worker_tightness),
                    r.method.to_string(),
                    opt(r.objective),
                    r.bound.to_string(),
                    r.bound_kind.as_str().to_string(),
                    opt(r.gap),
                    r.feasible.to_string(),
                    r.wall_ms.to_string(),
                    r.seed.to_string(),
                ]
            }),
        )
    }

    pub fn summary_csv(&self) -> String {
        write_csv(
            &SUMMARY_HEADER,
            self.summary.iter().map(|c| {
                vec![
                    opt(c.deadline_tightness),
                    opt(c.worker_tightness),
                    c.method.to_string(),
                    c.runs.to_string(),
                    c.feasible.to_string(),
                    opt(c.mean_gap),
                    opt(c.mean_deficit_vs_ga_linear),
                ]
            }),
        )
    }
}

struct Outcome {
    objective: Option<f64>,
    exact_optimal: bool,
    wall_ms: u64,
}

fn run_method(problem: &Problem, method: Method, ga: &GaConfig, config: &BenchConfig) -> Outcome {
    let clock = Instant::now();
    let (objective, exact_optimal) = match method {
        Method::GaLinear | Method::GaInverse => {
            let fitness = if method == Method::GaLinear {
                FitnessKind::Linear
            } else {
                FitnessKind::Inverse
            };
            let cfg = GaConfig {
                fitness,
                ..ga.clone()
            };
            (run_ga(problem, &cfg).ok().map(|r| r.objective()), false)
        }
        Method::HeuristicReadySort => (decode(problem, &ready_time_order(problem)).cost(), false),
        Method::Exact => match solve_exact(problem, config.exact_budget) {
            Ok(sol) => (Some(sol.objective), sol.status == ExactStatus::Optimal),
            Err(_) => (None, false),
        },
    };
    let wall_ms = if config.record_wall_time {
        clock.elapsed().as_millis() as u64
    } else {
        0
    };
    Outcome {
        objective,
        exact_optimal,
        wall_ms,
    }
}

/// Runs every method on every scenario. Cells run in parallel; rows come
/// out in (scenario, method) order.
pub fn run_benchmark(
    scenarios: &[BenchScenario],
    methods: &[Method],
    config: &BenchConfig,
) -> Result<BenchReport, BenchError> {
    let problems = scenarios
        .iter()
        .map(|s| {
            Problem::new(s.instance.clone()).map_err(|source| BenchError::Instance {
                id: s.id.clone(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let cells: Vec<(usize, Method)> = (0..scenarios.len())
        .flat_map(|k| {
            let problem = &problems[k];
            methods
                .iter()
                .copied()
                .filter(move |&m| {
                    m != Method::Exact || problem.subtasks().len() <= config.exact_max_subtasks
                })
                .map(move |m| (k, m))
        })
        .collect();
    let seed_for = |k: usize| config.ga.seed.wrapping_add(k as u64);
    let outcomes: Vec<Outcome> = cells
        .par_iter()
        .map(|&(k, m)| {
            let ga = GaConfig {
                seed: seed_for(k),
                ..config.ga.clone()
            };
            run_method(&problems[k], m, &ga, config)
        })
        .collect();

    let mut rows = Vec::with_capacity(cells.len());
    for k in 0..scenarios.len() {
        let here: Vec<(Method, &Outcome)> = cells
            .iter()
            .zip(&outcomes)
            .filter(|((kk, _), _)| *kk == k)
            .map(|((_, m), o)| (*m, o))
            .collect();
        let (bound, bound_kind) = here
            .iter()
            .find(|(m, o)| *m == Method::Exact && o.exact_optimal)
            .and_then(|(_, o)| o.objective)
            .map_or((lower_bound(&problems[k]), BoundKind::LowerBound), |b| {
                (b, BoundKind::Exact)
            });
        for (method, o) in here {
            rows.push(BenchRow {
                scenario_id: scenarios[k].id.clone(),
                deadline_tightness: scenarios[k].deadline_tightness,
                worker_tightness: scenarios[k].worker_tightness,
                method,
                objective: o.objective,
                bound,
                bound_kind,
                gap: o.objective.and_then(|c| optimality_gap(c, bound).ok()),
                feasible: o.objective.is_some(),
                wall_ms: o.wall_ms,
                seed: seed_for(k),
            });
        }
    }
    let summary = summarize(&rows);
    Ok(BenchReport { rows, summary })
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

fn summarize(rows: &[BenchRow]) -> Vec<CellSummary> {
    type Key = (Option<String>, Option<WorkerTightness>, Method);
    let reference: HashMap<&str, f64> = rows
        .iter()
        .filter(|r| r.method == Method::GaLinear)
        .filter_map(|r| Some((r.scenario_id.as_str(), r.objective?)))
        .collect();
    let mut order: Vec<Key> = Vec::new();
    let mut groups: HashMap<Key, Vec<&BenchRow>> = HashMap::new();
    for r in rows {
        let key = (
            r.deadline_tightness.map(|p| p.to_string()),
            r.worker_tightness,
            r.method,
        );
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let members = &groups[&key];
            let gaps: Vec<f64> = members.iter().filter_map(|r| r.gap).collect();
            let deficits: Vec<f64> = members
                .iter()
                .filter_map(|r| {
                    let base = *reference.get(r.scenario_id.as_str())?;
                    (base > 0.0).then_some(r.objective? / base - 1.0)
                })
                .collect();
            CellSummary {
                deadline_tightness: members[0].deadline_tightness,
                worker_tightness: key.1,
                method: key.2,
                runs: members.len(),
                feasible: members.iter().filter(|r| r.feasible).count(),
                mean_gap: mean(&gaps),
                mean_deficit_vs_ga_linear: mean(&deficits),
            }
        })
        .collect()
}

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

/// Draws a schedule as SVG: one row per task, one block per subtask
/// coloured by its first worker type and labelled with head-counts. Bay
/// tasks get a dashed frame over their open interval.
pub fn render_gantt(
    instance: &Instance,
    assignment: &ScheduleAssignment,
) -> Result<String, BenchError> {
    if instance.tasks.is_empty() {
        return Err(BenchError::EmptyInstance);
    }
    let violations = check_schedule(instance, assignment)?;
    if !violations.is_empty() {
        return Err(BenchError::Infeasible(violations.len()));
    }

    let horizon = instance.horizon_periods;
    let cell = if horizon <= 48 { 24 } else { 8 };
    let lane_h = 22;
    let left = 140;
    let top = 30;
    let type_index: HashMap<&str, usize> = instance
        .worker_types
        .iter()
        .enumerate()
        .map(|(i, w)| (w.id.as_str(), i))
        .collect();

    // lanes per task so overlapping subtasks stack
    let mut rows = Vec::with_capacity(instance.tasks.len());
    for task in &instance.tasks {
        let mut lane_ends: Vec<u32> = Vec::new();
        let mut subs: Vec<(usize, u32)> = task
            .subtasks
            .iter()
            .enumerate()
            .map(|(k, s)| (k, assignment.starts[&s.id]))
            .collect();
        subs.sort_by_key(|&(k, s)| (s, k));
        let mut placed = Vec::with_capacity(subs.len());
        for (k, s) in subs {
            let end = s + task.subtasks[k].duration;
            let lane = match lane_ends.iter().position(|&e| e <= s) {
                Some(l) => {
                    lane_ends[l] = end;
                    l
                }
                None => {
                    lane_ends.push(end);
                    lane_ends.len() - 1
                }
            };
            placed.push((k, s, lane));
        }
        placed.sort_by_key(|&(k, _, _)| k);
        rows.push((placed, lane_ends.len().max(1)));
    }

    let body_h: usize = rows.iter().map(|(_, lanes)| lanes * lane_h + 6).sum();
    let legend_y = top + body_h + 16;
    let width = left + cell * horizon as usize + 20;
    let height = legend_y + 24;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let tick = if horizon <= 48 { 1 } else { 12 };
    for t in (0..=horizon).step_by(tick) {
        let x = left + cell * t as usize;
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#dddddd"/>"##,
            top - 4,
            top + body_h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{}" text-anchor="middle">{t}</text>"#,
            top - 8
        );
    }

    let mut y = top;
    for (task, (placed, lanes)) in instance.tasks.iter().zip(&rows) {
        let row_h = lanes * lane_h;
        let label = if task.requires_bay {
            format!("{} [bay]", task.id)
        } else {
            task.id.clone()
        };
        let _ = writeln!(
            svg,
            r#"<text x="4" y="{}">{}</text>"#,
            y + row_h / 2 + 4,
            escape(&label)
        );
        if task.requires_bay {
            let lo = placed.iter().map(|&(_, s, _)| s).min().unwrap_or(0);
            let hi = placed
                .iter()
                .map(|&(k, s, _)| s + task.subtasks[k].duration)
                .max()
                .unwrap_or(0);
            let _ = writeln!(
                svg,
                r##"<rect class="bay" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333333" stroke-dasharray="4 2"/>"##,
                left + cell * lo as usize,
                y,
                cell * (hi - lo) as usize,
                row_h + 2
            );
        }
        for &(k, s, lane) in placed {
            let sub = &task.subtasks[k];
            let color = sub
                .requirements
                .keys()
                .next()
                .and_then(|w| type_index.get(w.as_str()))
                .map_or("#999999", |&i| PALETTE[i % PALETTE.len()]);
            let heads = sub
                .requirements
                .values()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("+");
            let x = left + cell * s as usize;
            let w = cell * sub.duration as usize;
            let by = y + 1 + lane * lane_h;
            let _ = writeln!(
                svg,
                r##"<rect class="subtask" x="{x}" y="{by}" width="{w}" height="{}" fill="{color}" stroke="#ffffff"><title>{} [{}, {})</title></rect>"##,
                lane_h - 2,
                escape(&sub.id),
                s,
                s + sub.duration
            );
            let _ = writeln!(
                svg,
                r##"<text x="{}" y="{}" text-anchor="middle" fill="#ffffff">{heads}</text>"##,
                x + w / 2,
                by + lane_h / 2 + 3
            );
        }
        y += row_h + 6;
    }

    let mut x = left;
    for (i, wt) in instance.worker_types.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="{legend_y}" width="12" height="12" fill="{}"/>"#,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}">{}</text>"#,
            x + 16,
            legend_y + 10,
            escape(&wt.label)
        );
        x += 20 + 7 * wt.label.len();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Decodes `order` and renders it; convenience for the CLI.
pub fn gantt_for_order(
    problem: &Problem,
    order: &crate::decoder::Chromosome,
) -> Result<String, BenchError> {
    match decode(problem, order) {
        DecodeOutcome::Feasible { assignment, .. } => render_gantt(problem.instance(), &assignment),
        DecodeOutcome::Infeasible { .. } => Err(BenchError::Infeasible(1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::Chromosome;
    use crate::fixtures::two_tasks;

    #[test]
    fn gap_examples() {
        assert_eq!(optimality_gap(6.0, 6.0).unwrap(), 0.0);
        assert!((optimality_gap(10.0, 6.0).unwrap() - 0.6667).abs() < 1e-4);
        assert_eq!(optimality_gap(2.0, 1.0).unwrap(), 1.0);
        assert!(matches!(
            optimality_gap(1.0, 0.0),
            Err(BenchError::NonPositiveBound(_))
        ));
        assert!(matches!(
            optimality_gap(5.0, 6.0),
            Err(BenchError::CostBelowBound { .. })
        ));
    }

    #[test]
    fn method_names() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert_eq!("ga1".parse::<Method>().unwrap(), Method::GaLinear);
        assert!("simplex".parse::<Method>().is_err());
    }

    fn two_tasks_scenario() -> BenchScenario {
        BenchScenario {
            id: "two_tasks".into(),
            deadline_tightness: None,
            worker_tightness: None,
            instance: two_tasks(),
        }
    }

    #[test]
    fn two_tasks_all_methods_hit_optimum() {
        let config = BenchConfig {
            record_wall_time: false,
            ..BenchConfig::default()
        };
        let report = run_benchmark(&[two_tasks_scenario()], &Method::ALL, &config).unwrap();
        assert_eq!(report.rows.len(), 4);
        for r in &report.rows {
            assert_eq!(r.objective, Some(6.0), "{:?}", r.method);
            assert_eq!(r.gap, Some(0.0));
            assert_eq!(r.bound_kind, BoundKind::Exact);
        }
        assert!(report
            .summary
            .iter()
            .all(|c| c.mean_deficit_vs_ga_linear == Some(0.0)));
    }

    #[test]
    fn heuristic_failure_is_recorded() {
        // Ready-time order puts the two field tasks first; they use up the
        // only electrician periods and the bay task cannot be placed.
        let mut inst = two_tasks();
        let mut roster = vec![0; 10];
        roster[..2].fill(1);
        inst.availability.insert("worker".into(), roster);
        inst.tasks = vec![
            one_period("f1", 0, false),
            one_period("f2", 0, false),
            one_period("bay", 1, true),
        ];
        let scenario = BenchScenario {
            instance: inst,
            ..two_tasks_scenario()
        };
        let config = BenchConfig {
            record_wall_time: false,
            ..BenchConfig::default()
        };
        let report = run_benchmark(&[scenario], &Method::ALL, &config).unwrap();
        let row = |m| report.rows.iter().find(|r| r.method == m).unwrap();
        assert!(!row(Method::HeuristicReadySort).feasible);
        assert!(row(Method::HeuristicReadySort).objective.is_none());
        let cell = report
            .summary
            .iter()
            .find(|c| c.method == Method::HeuristicReadySort)
            .unwrap();
        assert_eq!((cell.runs, cell.feasible), (1, 0));
        // every method fails here: only two electrician periods for three tasks
        assert!(!row(Method::GaLinear).feasible);
    }

    fn one_period(id: &str, ready: u32, bay: bool) -> crate::model::Task {
        let mut t = two_tasks().tasks[0].clone();
        t.id = id.into();
        t.ready_time = ready;
        t.requires_bay = bay;
        t.subtasks.truncate(1);
        t.subtasks[0].id = format!("{id}_s");
        t
    }

    #[test]
    fn csv_quotes_awkward_ids() {
        let config = BenchConfig {
            record_wall_time: false,
            ..BenchConfig::default()
        };
        let scenario = BenchScenario {
            id: "plant, north".into(),
            ..two_tasks_scenario()
        };
        let report = run_benchmark(&[scenario], &[Method::Exact], &config).unwrap();
        assert_eq!(
            report.to_csv(),
            "scenario_id,pi,worker_tightness,method,objective,bound,bound_kind,gap,feasible,wall_ms,seed\n\
             \"plant, north\",,,EXACT,6,6,exact,0,true,0,0\n"
        );
    }

    #[test]
    fn gantt_rows_and_blocks() {
        let p = Problem::new(two_tasks()).unwrap();
        let svg = gantt_for_order(&p, &Chromosome::new(vec![0, 1])).unwrap();
        assert_eq!(svg.matches(r#"class="subtask""#).count(), 4);
        for (x, w) in [(140, 24), (164, 48), (212, 24), (236, 48)] {
            assert!(svg.contains(&format!(r#"x="{x}" y="#)), "block at {x}");
            assert!(svg.contains(&format!(r#"width="{w}""#)));
        }
        assert_eq!(
            svg,
            gantt_for_order(&p, &Chromosome::new(vec![0, 1])).unwrap()
        );
        assert_eq!(svg, include_str!("../tests/data/two_tasks_gantt.svg"));
    }

    #[test]
    fn gantt_errors() {
        let mut empty = two_tasks();
        empty.tasks.clear();
        assert!(matches!(
            render_gantt(&empty, &ScheduleAssignment::default()),
            Err(BenchError::EmptyInstance)
        ));
        let clash = ScheduleAssignment::new(
            [("A1", 0), ("A2", 1), ("B1", 2), ("B2", 4)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        );
        assert!(matches!(
            render_gantt(&two_tasks(), &clash),
            Err(BenchError::Infeasible(_))
        ));
    }
}
