//! Random instances and experiment scenarios.
//!
//! [`random_instance`] builds synthetic weekly schedules from a
//! [`TemplateConfig`]. [`generate_scenarios`] then derives experiment
//! scenarios from a template instance by resampling ready times, setting
//! deadlines from a tightness multiplier on each task's minimum makespan,
//! and optionally replacing the worker roster.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{min_makespan, validate_instance, Instance, Period, Subtask, Task, WorkerType};

/// How the worker roster of a random template is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Roster {
    /// Day/night shifts. Each type gets a day head-count in `day` and a
    /// night head-count in `night`; `always_on` types get `always_on_count`
    /// in every period.
    Shifts {
        shift_length: Period,
        day: (u32, u32),
        night: (u32, u32),
        always_on: usize,
        always_on_count: u32,
    },
    /// Every type has exactly the largest single-subtask requirement in
    /// every period, every bay task gets its own bay, and the horizon is
    /// long enough to run all subtasks back to back after the last ready
    /// time.
    Ample,
}

/// Knobs for [`random_instance`].
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateConfig {
    pub tasks: (usize, usize),
    pub subtasks_per_task: (usize, usize),
    /// Cap on the total number of subtasks.
    pub max_subtasks: Option<usize>,
    pub worker_types: usize,
    pub num_bays: u32,
    pub horizon: Period,
    pub duration: (Period, Period),
    pub head_count: (u32, u32),
    /// Probability that a subtask depends on each earlier subtask of its task.
    pub precedence_probability: f64,
    pub bay_fraction: f64,
    pub roster: Roster,
    /// Ready times are sampled from `[0, ready_limit]`.
    pub ready_limit: Period,
    pub deadline_tightness: f64,
    pub makespan_weight: f64,
    pub lateness_weight: f64,
}

impl TemplateConfig {
    /// At most 4 tasks and 8 subtasks on a 16-period horizon; small enough
    /// for the exact solver.
    pub fn tiny() -> Self {
        Self {
            tasks: (2, 4),
            subtasks_per_task: (1, 3),
            max_subtasks: Some(8),
            worker_types: 2,
            num_bays: 1,
            horizon: 16,
            duration: (1, 3),
            head_count: (1, 2),
            precedence_probability: 0.5,
            bay_fraction: 0.4,
            roster: Roster::Shifts {
                shift_length: 4,
                day: (2, 3),
                night: (1, 2),
                always_on: 0,
                always_on_count: 0,
            },
            ready_limit: 6,
            deadline_tightness: 1.5,
            makespan_weight: 1.0,
            lateness_weight: 1.0,
        }
    }

    /// Small instances satisfying the decoder's feasibility guarantee.
    pub fn ample_small() -> Self {
        Self {
            tasks: (2, 6),
            subtasks_per_task: (1, 4),
            max_subtasks: None,
            roster: Roster::Ample,
            bay_fraction: 0.5,
            ..Self::tiny()
        }
    }

    /// 12 tasks, 2 to 6 subtasks each, 5 worker types, 2 bays, one week of
    /// hourly periods.
    pub fn desk() -> Self {
        Self {
            tasks: (12, 12),
            subtasks_per_task: (2, 6),
            max_subtasks: None,
            worker_types: 5,
            num_bays: 2,
            horizon: 168,
            duration: (1, 8),
            head_count: (1, 3),
            precedence_probability: 0.3,
            bay_fraction: 1.0 / 3.0,
            roster: Roster::Shifts {
                shift_length: 12,
                day: (3, 6),
                night: (1, 3),
                always_on: 1,
                always_on_count: 10,
            },
            ready_limit: 144,
            deadline_tightness: 1.5,
            makespan_weight: 1.0,
            lateness_weight: 1.0,
        }
    }

    /// About 100 tasks, 800 subtasks, 25 worker types and 5 bays.
    pub fn mine_scale() -> Self {
        Self {
            tasks: (100, 100),
            subtasks_per_task: (1, 15),
            worker_types: 25,
            num_bays: 5,
            duration: (1, 4),
            precedence_probability: 0.15,
            // night crews cover the largest head-count
            roster: Roster::Shifts {
                shift_length: 12,
                day: (3, 6),
                night: (3, 4),
                always_on: 2,
                always_on_count: 10,
            },
            ..Self::desk()
        }
    }
}

fn sample(rng: &mut impl Rng, (lo, hi): (u32, u32)) -> u32 {
    rng.random_range(lo..=hi.max(lo))
}

fn round_half_up(x: f64) -> Period {
    (x + 0.5).floor() as Period
}

/// [`random_instance`] with its own ChaCha8 stream seeded from `seed`.
pub fn seeded_instance(config: &TemplateConfig, seed: u64) -> Instance {
    random_instance(config, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Draws a random valid instance.
pub fn random_instance(config: &TemplateConfig, rng: &mut impl Rng) -> Instance {
    let n_tasks = rng.random_range(config.tasks.0..=config.tasks.1.max(config.tasks.0));
    let worker_types: Vec<WorkerType> = (0..config.worker_types)
        .map(|p| WorkerType {
            id: format!("w{p}"),
            label: format!("Trade {p}"),
        })
        .collect();

    let mut tasks = Vec::with_capacity(n_tasks);
    let mut total = 0;
    for i in 0..n_tasks {
        let mut count = rng.random_range(
            config.subtasks_per_task.0..=config.subtasks_per_task.1.max(config.subtasks_per_task.0),
        );
        if let Some(cap) = config.max_subtasks {
            // leave at least one subtask for each remaining task
            let left = cap.saturating_sub(total + (n_tasks - i - 1));
            count = count.min(left).max(1);
        }
        total += count;
        let mut subtasks: Vec<Subtask> = Vec::with_capacity(count);
        for k in 0..count {
            let predecessors = (0..k)
                .filter(|_| rng.random_bool(config.precedence_probability))
                .map(|m| subtasks[m].id.clone())
                .collect();
            let wt = rng.random_range(0..config.worker_types);
            subtasks.push(Subtask {
                id: format!("T{i}S{k}"),
                duration: sample(rng, config.duration),
                requirements: IndexMap::from([(
                    worker_types[wt].id.clone(),
                    sample(rng, config.head_count),
                )]),
                predecessors,
            });
        }
        tasks.push(Task {
            id: format!("T{i}"),
            ready_time: 0,
            deadline: 0,
            requires_bay: rng.random_bool(config.bay_fraction),
            makespan_weight: config.makespan_weight,
            lateness_weight: config.lateness_weight,
            subtasks,
        });
    }

    let mut horizon = config.horizon;
    let mut num_bays = config.num_bays;
    let availability: IndexMap<String, Vec<u32>> = match config.roster {
        Roster::Ample => {
            let work: Period = tasks
                .iter()
                .flat_map(|t| &t.subtasks)
                .map(|s| s.duration)
                .sum();
            horizon = config.ready_limit + work;
            num_bays = tasks.iter().filter(|t| t.requires_bay).count() as u32;
            worker_types
                .iter()
                .map(|w| {
                    let need = tasks
                        .iter()
                        .flat_map(|t| &t.subtasks)
                        .filter_map(|s| s.requirements.get(&w.id))
                        .copied()
                        .max()
                        .unwrap_or(0);
                    (w.id.clone(), vec![need; horizon as usize])
                })
                .collect()
        }
        Roster::Shifts {
            shift_length,
            day,
            night,
            always_on,
            always_on_count,
        } => {
            let mut ids: Vec<usize> = (0..worker_types.len()).collect();
            ids.shuffle(rng);
            let mut rows = vec![Vec::new(); worker_types.len()];
            for (rank, &p) in ids.iter().enumerate() {
                rows[p] = if rank < always_on {
                    vec![always_on_count; horizon as usize]
                } else {
                    // day count never below the largest head-count
                    let d = sample(rng, (day.0.max(config.head_count.1), day.1));
                    let n = sample(rng, night);
                    (0..horizon)
                        .map(|t| {
                            if (t / shift_length.max(1)) % 2 == 0 {
                                d
                            } else {
                                n
                            }
                        })
                        .collect()
                };
            }
            worker_types
                .iter()
                .zip(rows)
                .map(|(w, row)| (w.id.clone(), row))
                .collect()
        }
    };

    let mut instance = Instance {
        period_minutes: 60,
        horizon_periods: horizon,
        num_bays,
        worker_types,
        availability,
        tasks,
    };
    let limit = config.ready_limit.min(horizon - 1);
    resample_times(&mut instance, (0, limit), config.deadline_tightness, rng);
    debug_assert!(validate_instance(&instance).is_empty());
    instance
}

/// Draws every ready time uniformly from `window` (capped so the task's
/// minimum makespan still fits) and sets `deadline = ready + round(pi * mm)`.
fn resample_times(instance: &mut Instance, window: (Period, Period), pi: f64, rng: &mut impl Rng) {
    let horizon = instance.horizon_periods;
    for task in &mut instance.tasks {
        let mm = min_makespan(task).expect("template tasks are acyclic");
        let hi = window.1.min(horizon.saturating_sub(mm)).max(window.0);
        task.ready_time = rng.random_range(window.0..=hi);
        task.deadline = task.ready_time + round_half_up(pi * f64::from(mm));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorkerTightness {
    /// The template's own roster.
    Tight,
    /// 10 workers of every type in every period.
    Medium,
    /// 15 workers of every type in every period.
    Loose,
}

impl WorkerTightness {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Tight => "tight",
            Self::Medium => "medium",
            Self::Loose => "loose",
        }
    }

    fn uniform_count(self) -> Option<u32> {
        match self {
            Self::Tight => None,
            Self::Medium => Some(10),
            Self::Loose => Some(15),
        }
    }
}

impl fmt::Display for WorkerTightness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WorkerTightness {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tight" => Ok(Self::Tight),
            "medium" => Ok(Self::Medium),
            "loose" => Ok(Self::Loose),
            other => Err(format!("unknown worker tightness `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub base: Instance,
    /// Deadline tightness multiplier, at least 1.
    pub deadline_tightness: f64,
    pub worker_tightness: WorkerTightness,
    /// Inclusive ready-time range; defaults to the first 6/7 of the horizon.
    pub ready_window: Option<(Period, Period)>,
    pub count: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn new(base: Instance, deadline_tightness: f64, worker_tightness: WorkerTightness) -> Self {
        Self {
            base,
            deadline_tightness,
            worker_tightness,
            ready_window: None,
            count: 1,
            seed: 0,
        }
    }

    fn window(&self) -> (Period, Period) {
        let h = self.base.horizon_periods;
        self.ready_window
            .unwrap_or((0, (h * 6 / 7).min(h.saturating_sub(1))))
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("ready-time window {0:?} is outside the horizon of {1} periods")]
    Window((Period, Period), Period),
    #[error("deadline tightness must be a finite number >= 1, got {0}")]
    Tightness(f64),
    #[error("template instance is invalid: {0}")]
    Template(String),
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub index: usize,
    pub deadline_tightness: f64,
    pub worker_tightness: WorkerTightness,
    pub instance: Instance,
}

impl Scenario {
    /// `scenario_{pi}_{tightness}_{k}`.
    pub fn name(&self) -> String {
        format!(
            "scenario_{}_{}_{}",
            self.deadline_tightness, self.worker_tightness, self.index
        )
    }

    pub fn file_name(&self) -> String {
        format!("{}.json", self.name())
    }

    /// Recovers `(pi, tightness, index)` from a file stem.
    pub fn parse_name(stem: &str) -> Option<(f64, WorkerTightness, usize)> {
        let rest = stem.strip_prefix("scenario_")?;
        let mut parts = rest.rsplitn(3, '_');
        let index = parts.next()?.parse().ok()?;
        let tightness = parts.next()?.parse().ok()?;
        let pi = parts.next()?.parse().ok()?;
        Some((pi, tightness, index))
    }
}

/// Derives `config.count` scenarios from the template. Scenario `k` depends
/// only on the seed and `k`.
pub fn generate_scenarios(config: &ScenarioConfig) -> Result<Vec<Scenario>, ScenarioError> {
    let pi = config.deadline_tightness;
    if !pi.is_finite() || pi < 1.0 {
        return Err(ScenarioError::Tightness(pi));
    }
    let errors = validate_instance(&config.base);
    if !errors.is_empty() {
        return Err(ScenarioError::Template(
            errors
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    let horizon = config.base.horizon_periods;
    let window = config.window();
    if window.0 > window.1 || window.1 >= horizon {
        return Err(ScenarioError::Window(window, horizon));
    }

    let mut base = config.base.clone();
    if let Some(n) = config.worker_tightness.uniform_count() {
        for row in base.availability.values_mut() {
            row.fill(n);
        }
    }
    Ok((0..config.count)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(k as u64);
            let mut instance = base.clone();
            resample_times(&mut instance, window, pi, &mut rng);
            Scenario {
                index: k,
                deadline_tightness: pi,
                worker_tightness: config.worker_tightness,
                instance,
            }
        })
        .collect())
}
