//! `maintsched`: validate, solve and benchmark maintenance scheduling
//! instances from the command line.
//!
//! Exit status is 0 on success, 1 when no feasible schedule was produced
//! and 2 for unusable input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use maintsched::bench::{render_gantt, run_benchmark, BenchConfig, BenchScenario, Method};
use maintsched::evaluator::ScheduleDocument;
use maintsched::exact::solve_exact;
use maintsched::ga::GaError;
use maintsched::milp::{emit_milp, import_solution, MilpMode, MilpOptions};
use maintsched::scenario::{
    generate_scenarios, seeded_instance, Scenario, ScenarioConfig, TemplateConfig, WorkerTightness,
};
use maintsched::{
    decode, load_instance, min_makespan, run_ga, validate_instance, Chromosome, DecodeOutcome,
    FitnessKind, GaConfig, Instance, Problem, ScheduleAssignment,
};

#[derive(Parser)]
#[command(name = "maintsched", version, about = "Weekly maintenance scheduling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file and list every problem found.
    Validate { instance: PathBuf },
    /// Print the critical-path length of each task.
    MinMakespan { instance: PathBuf },
    /// Decode one task ordering into a schedule.
    Decode {
        instance: PathBuf,
        /// Comma-separated task ids; defaults to input order.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search task orderings with the genetic algorithm.
    SolveGa {
        instance: PathBuf,
        #[command(flatten)]
        ga: GaArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a small instance to optimality.
    SolveExact {
        instance: PathBuf,
        /// Search-node budget.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the time-indexed integer program in LP format.
    ExportMilp {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Amended)]
        mode: ModeArg,
        /// Refuse to write models with more variables than this.
        #[arg(long, default_value_t = 5_000_000)]
        max_vars: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read an external solver's solution back into a schedule.
    ImportSolution {
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Amended)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a family of scenarios from a template.
    GenScenarios(GenArgs),
    /// Run methods over a directory of scenarios and write a CSV report.
    Bench(BenchArgs),
    /// Draw a schedule as SVG.
    Gantt {
        instance: PathBuf,
        #[arg(long, value_delimiter = ',', conflicts_with = "schedule")]
        order: Option<Vec<String>>,
        /// Schedule JSON as written by `decode` or `solve-ga`.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GaArgs {
    /// Random seed; drawn from the OS and echoed to stderr when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pop: usize,
    #[arg(long, default_value_t = 60)]
    gens: usize,
    #[arg(long, default_value_t = 0.001)]
    mutation: f64,
    #[arg(long, default_value_t = 1)]
    elite: usize,
    #[arg(long, value_enum, default_value_t = FitnessArg::Linear)]
    fitness: FitnessArg,
    /// Decoder threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl GaArgs {
    fn config(&self) -> GaConfig {
        GaConfig {
            population_size: self.pop,
            generations: self.gens,
            mutation_rate: self.mutation,
            elite_count: self.elite,
            fitness: self.fitness.into(),
            seed: resolve_seed(self.seed),
            workers: self.workers,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Base instance whose tasks and roster are resampled.
    #[arg(long, conflicts_with = "scale", required_unless_present = "scale")]
    template: Option<PathBuf>,
    /// Use a built-in random template instead of a file.
    #[arg(long, value_enum)]
    scale: Option<ScaleArg>,
    /// Deadline tightness multiplier (>= 1).
    #[arg(long, default_value_t = 1.0)]
    pi: f64,
    #[arg(long, default_value = "medium")]
    tightness: WorkerTightness,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of scenario JSON files.
    #[arg(long)]
    scenarios: PathBuf,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "GA_LINEAR,GA_INVERSE,HEURISTIC_READY_SORT,EXACT"
    )]
    methods: Vec<Method>,
    #[command(flatten)]
    ga: GaArgs,
    #[arg(long, default_value_t = 20_000_000)]
    exact_budget: u64,
    /// EXACT is skipped above this many subtasks.
    #[arg(long, default_value_t = 10)]
    exact_max_subtasks: usize,
    /// Write 0 in the wall_ms column so the report is reproducible.
    #[arg(long)]
    no_wall_time: bool,
    /// Per-cell summary CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitnessArg {
    Linear,
    Inverse,
}

impl From<FitnessArg> for FitnessKind {
    fn from(f: FitnessArg) -> Self {
        match f {
            FitnessArg::Linear => FitnessKind::Linear,
            FitnessArg::Inverse => FitnessKind::Inverse,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Literal,
    Amended,
}

impl From<ModeArg> for MilpMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Literal => MilpMode::Literal,
            ModeArg::Amended => MilpMode::Amended,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Desk,
    Mine,
}

/// A run that completed but found nothing feasible.
#[derive(Debug)]
struct NoSchedule(String);

impl std::fmt::Display for NoSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NoSchedule {}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed: {s}");
        s
    })
}

fn read_instance(path: &Path) -> Result<Instance> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    load_instance(&bytes).with_context(|| format!("loading {}", path.display()))
}

fn read_problem(path: &Path) -> Result<Problem> {
    Ok(Problem::new(read_instance(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(value: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn chromosome(problem: &Problem, order: Option<&[String]>) -> Result<Chromosome> {
    match order {
        Some(ids) => Ok(Chromosome::from_ids(problem, ids)?),
        None => Ok(Chromosome::identity(problem.tasks().len())),
    }
}

fn decoded(
    problem: &Problem,
    order: &Chromosome,
) -> Result<(ScheduleAssignment, maintsched::ScheduleMetrics)> {
    match decode(problem, order) {
        DecodeOutcome::Feasible {
            assignment,
            metrics,
        } => Ok((assignment, metrics)),
        DecodeOutcome::Infeasible { subtask } => {
            Err(NoSchedule(format!("INFEASIBLE: subtask {subtask} cannot be placed")).into())
        }
    }
}

/// Accepts a schedule document or a bare `{subtask: start}` map.
fn read_assignment(path: &Path) -> Result<ScheduleAssignment> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text)?;
    let starts = value.get("starts").cloned().unwrap_or(value);
    Ok(serde_json::from_value(starts)?)
}

fn scenario_files(dir: &Path) -> Result<Vec<BenchScenario>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    if paths.is_empty() {
        bail!("no .json scenarios in {}", dir.display());
    }
    paths
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            let parsed = Scenario::parse_name(&stem);
            Ok(BenchScenario {
                deadline_tightness: parsed.map(|(pi, _, _)| pi),
                worker_tightness: parsed.map(|(_, w, _)| w),
                id: stem,
                instance: read_instance(p)?,
            })
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { instance } => {
            let bytes =
                fs::read(&instance).with_context(|| format!("reading {}", instance.display()))?;
            let parsed: Instance = match serde_json::from_slice(&bytes) {
                Ok(v) => v,
                Err(e) => bail!(
                    "PARSE_ERROR at line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ),
            };
            let errors = validate_instance(&parsed);
            if errors.is_empty() {
                let subtasks: usize = parsed.tasks.iter().map(|t| t.subtasks.len()).sum();
                println!("ok: {} tasks, {subtasks} subtasks", parsed.tasks.len());
                Ok(())
            } else {
                for e in &errors {
                    eprintln!("{}: {}", e.code, e.message);
                }
                bail!("{} validation error(s)", errors.len())
            }
        }
        Command::MinMakespan { instance } => {
            let inst = read_instance(&instance)?;
            for task in &inst.tasks {
                println!("{}\t{}", task.id, min_makespan(task)?);
            }
            Ok(())
        }
        Command::Decode {
            instance,
            order,
            out,
        } => {
            let problem = read_problem(&instance)?;
            let order = chromosome(&problem, order.as_deref())?;
            let (assignment, metrics) = decoded(&problem, &order)?;
            let doc = ScheduleDocument::new(problem.instance(), assignment, metrics);
            emit(out.as_deref(), &to_json(&serde_json::to_value(doc)?)?)
        }
        Command::SolveGa { instance, ga, out } => {
            let problem = read_problem(&instance)?;
            let config = ga.config();
            config.validate()?;
            match run_ga(&problem, &config) {
                Ok(result) => {
                    let doc = serde_json::to_value(result.to_document(&problem))?;
                    emit(out.as_deref(), &to_json(&doc)?)
                }
                Err(GaError::AllInfeasible { unplaceable }) => Err(NoSchedule(format!(
                    "ALL_INFEASIBLE: unplaceable subtasks {}",
                    unplaceable.join(", ")
                ))
                .into()),
                Err(e) => Err(e.into()),
            }
        }
        Command::SolveExact {
            instance,
            budget,
            out,
        } => {
            let problem = read_problem(&instance)?;
            let sol = solve_exact(&problem, budget).map_err(|e| NoSchedule(e.to_string()))?;
            let metrics = maintsched::compute_metrics(problem.instance(), &sol.assignment)?;
            let doc = ScheduleDocument::new(problem.instance(), sol.assignment, metrics);
            let mut value = serde_json::to_value(doc)?;
            value["status"] = serde_json::to_value(sol.status)?;
            value["nodes"] = sol.nodes.into();
            emit(out.as_deref(), &to_json(&value)?)
        }
        Command::ExportMilp {
            instance,
            mode,
            max_vars,
            out,
        } => {
            let problem = read_problem(&instance)?;
            let options = MilpOptions {
                mode: mode.into(),
                max_variables: max_vars,
            };
            emit(out.as_deref(), &emit_milp(&problem, &options)?)
        }
        Command::ImportSolution {
            instance,
            solution,
            mode,
            out,
        } => {
            let problem = read_problem(&instance)?;
            let text = fs::read_to_string(&solution)
                .with_context(|| format!("reading {}", solution.display()))?;
            let imported = match import_solution(&problem, &text, mode.into()) {
                Ok(v) => v,
                Err(maintsched::milp::MilpError::Infeasible(v)) => {
                    return Err(NoSchedule(format!(
                        "imported schedule violates {} constraint(s)",
                        v.len()
                    ))
                    .into())
                }
                Err(e) => return Err(e.into()),
            };
            let doc =
                ScheduleDocument::new(problem.instance(), imported.assignment, imported.metrics);
            let mut value = serde_json::to_value(doc)?;
            value["parity"] = serde_json::to_value(&imported.parity)?;
            if imported.parity.within_tolerance == Some(false) {
                eprintln!(
                    "warning: solver objective differs from evaluator by {}",
                    imported.parity.difference.unwrap_or(f64::NAN)
                );
            }
            emit(out.as_deref(), &to_json(&value)?)
        }
        Command::GenScenarios(args) => {
            let seed = resolve_seed(args.seed);
            let base = match (&args.template, args.scale) {
                (Some(path), _) => read_instance(path)?,
                (None, Some(ScaleArg::Desk)) => seeded_instance(&TemplateConfig::desk(), seed),
                (None, Some(ScaleArg::Mine)) => {
                    seeded_instance(&TemplateConfig::mine_scale(), seed)
                }
                (None, None) => bail!("one of --template or --scale is required"),
            };
            let config = ScenarioConfig {
                count: args.count,
                seed,
                ..ScenarioConfig::new(base, args.pi, args.tightness)
            };
            fs::create_dir_all(&args.out)?;
            for scenario in generate_scenarios(&config)? {
                let path = args.out.join(scenario.file_name());
                fs::write(&path, maintsched::save_instance(&scenario.instance))?;
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Bench(args) => {
            let scenarios = scenario_files(&args.scenarios)?;
            let config = BenchConfig {
                ga: args.ga.config(),
                exact_budget: args.exact_budget,
                exact_max_subtasks: args.exact_max_subtasks,
                record_wall_time: !args.no_wall_time,
            };
            config.ga.validate()?;
            let report = run_benchmark(&scenarios, &args.methods, &config)?;
            if let Some(path) = &args.summary {
                fs::write(path, report.summary_csv())?;
            }
            emit(args.out.as_deref(), &report.to_csv())
        }
        Command::Gantt {
            instance,
            order,
            schedule,
            out,
        } => {
            let problem = read_problem(&instance)?;
            let assignment = match schedule {
                Some(path) => read_assignment(&path)?,
                None => decoded(&problem, &chromosome(&problem, order.as_deref())?)?.0,
            };
            let svg = render_gantt(problem.instance(), &assignment).map_err(|e| match e {
                maintsched::bench::BenchError::Infeasible(_) => anyhow!(NoSchedule(e.to_string())),
                other => other.into(),
            })?;
            emit(out.as_deref(), &svg)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<NoSchedule>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
