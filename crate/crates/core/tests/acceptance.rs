//! End-to-end acceptance checks. Run with `--nocapture` to see one
//! PASS/FAIL line per criterion.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use maintsched::bench::{optimality_gap, run_benchmark, BenchConfig, BenchScenario, Method};
use maintsched::exact::{solve_exact, ExactStatus};
use maintsched::fixtures::two_tasks;
use maintsched::ga::{GaResult, GenerationStats};
use maintsched::milp::{
    assignment_values, emit_milp, import_solution, render_solution, LpModel, MilpMode, MilpOptions,
};
use maintsched::scenario::{
    generate_scenarios, random_instance, seeded_instance, ScenarioConfig, TemplateConfig,
    WorkerTightness,
};
use maintsched::{check_schedule, decode, run_ga, Chromosome, DecodeOutcome, GaConfig, Problem};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// Every GA trace produced here, for the elitism check.
#[derive(Default)]
struct Traces(Vec<Vec<GenerationStats>>);

impl Traces {
    fn record(&mut self, result: &GaResult) {
        self.0.push(result.trace.clone());
    }
}

fn decoder_feasibility() -> Verdict {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut decoded, mut feasible, mut dirty) = (0, 0, 0);
    for k in 0..500 {
        let template = match k % 3 {
            0 => TemplateConfig::tiny(),
            1 => TemplateConfig::ample_small(),
            _ => TemplateConfig::desk(),
        };
        let problem = Problem::new(random_instance(&template, &mut rng)).unwrap();
        let mut order: Vec<usize> = (0..problem.tasks().len()).collect();
        for _ in 0..10 {
            order.shuffle(&mut rng);
            decoded += 1;
            if let DecodeOutcome::Feasible { assignment, .. } =
                decode(&problem, &Chromosome::new(order.clone()))
            {
                feasible += 1;
                if !check_schedule(problem.instance(), &assignment)
                    .unwrap()
                    .is_empty()
                {
                    dirty += 1;
                }
            }
        }
    }
    let elapsed = clock.elapsed();
    verdict(
        dirty == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{decoded} decodes, {feasible} feasible, {dirty} with violations, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn two_tasks_reproduction() -> Verdict {
    let problem = Problem::new(two_tasks()).unwrap();
    let run = |order: Vec<usize>| match decode(&problem, &Chromosome::new(order)) {
        DecodeOutcome::Feasible { metrics, .. } => {
            Some((metrics.objective, metrics.per_task["task1"].makespan))
        }
        DecodeOutcome::Infeasible { .. } => None,
    };
    let (a, b) = (run(vec![0, 1]), run(vec![1, 0]));
    verdict(
        a == Some((6.0, 3)) && b == Some((10.0, 7)),
        format!("order (1,2) -> {a:?}, order (2,1) -> {b:?} as (objective, task1 makespan)"),
    )
}

/// Cheapest decode over every task order.
fn best_decodable(problem: &Problem) -> f64 {
    fn orders(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in orders(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    orders(problem.tasks().len())
        .into_iter()
        .filter_map(|o| decode(problem, &Chromosome::new(o)).cost())
        .fold(f64::INFINITY, f64::min)
}

fn oracle_equivalence(traces: &mut Traces) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut optimal, mut within, mut total, mut skipped) = (0, 0, 0, 0);
    let mut reachable = 0;
    while total < 20 {
        let problem = Problem::new(random_instance(&TemplateConfig::tiny(), &mut rng)).unwrap();
        let exact = match solve_exact(&problem, 200_000_000) {
            Ok(sol) if sol.status == ExactStatus::Optimal => sol.objective,
            _ => {
                skipped += 1;
                continue;
            }
        };
        total += 1;
        let config = GaConfig {
            population_size: 50,
            generations: 60,
            seed: total as u64,
            ..GaConfig::default()
        };
        let Ok(result) = run_ga(&problem, &config) else {
            continue;
        };
        traces.record(&result);
        let cost = result.objective();
        if (cost - best_decodable(&problem)).abs() < 1e-9 {
            reachable += 1;
        }
        if (cost - exact).abs() < 1e-9 {
            optimal += 1;
        }
        if cost <= exact * 1.1 + 1e-9 {
            within += 1;
        }
    }
    verdict(
        optimal * 100 >= total * 80 && within == total,
        format!(
            "optimal {optimal}/{total}, within 10% {within}/{total}, best decodable order {reachable}/{total} ({skipped} infeasible instances redrawn)"
        ),
    )
}

fn elitism(traces: &Traces) -> Verdict {
    let mut broken = 0;
    for trace in &traces.0 {
        let mut best = f64::INFINITY;
        for g in trace {
            if let Some(m) = g.min {
                if m > best + 1e-12 {
                    broken += 1;
                    break;
                }
                best = m;
            }
        }
    }
    verdict(
        broken == 0 && !traces.0.is_empty(),
        format!("{} runs, {broken} with a rising best cost", traces.0.len()),
    )
}

fn fitness_trend() -> Verdict {
    let base = seeded_instance(&TemplateConfig::desk(), 5);
    let config = ScenarioConfig {
        count: 80,
        seed: 19,
        ..ScenarioConfig::new(base, 1.0, WorkerTightness::Tight)
    };
    let scenarios: Vec<BenchScenario> = generate_scenarios(&config)
        .unwrap()
        .into_iter()
        .map(Into::into)
        .collect();
    let bench = BenchConfig {
        ga: GaConfig {
            seed: 1000,
            ..GaConfig::default()
        },
        record_wall_time: false,
        ..BenchConfig::default()
    };
    let report = run_benchmark(&scenarios, &[Method::GaLinear, Method::GaInverse], &bench).unwrap();
    let mut by_scenario: HashMap<&str, [Option<f64>; 2]> = HashMap::new();
    for row in &report.rows {
        let slot = usize::from(row.method == Method::GaInverse);
        by_scenario.entry(&row.scenario_id).or_default()[slot] = row.objective;
    }
    let paired: Vec<(f64, f64)> = by_scenario
        .values()
        .filter_map(|[a, b]| Some(((*a)?, (*b)?)))
        .collect();
    let n = paired.len() as f64;
    let linear = paired.iter().map(|p| p.0).sum::<f64>() / n;
    let inverse = paired.iter().map(|p| p.1).sum::<f64>() / n;
    let better = paired.iter().filter(|p| p.0 < p.1).count();
    let worse = paired.iter().filter(|p| p.0 > p.1).count();
    verdict(
        paired.len() >= 50 && linear <= inverse,
        format!(
            "{} paired scenarios of {}, mean GA_LINEAR {linear:.3} vs GA_INVERSE {inverse:.3} (linear better {better}, worse {worse})",
            paired.len(),
            scenarios.len()
        ),
    )
}

fn gap_unit() -> Verdict {
    let a = optimality_gap(2.0, 1.0).unwrap();
    let b = optimality_gap(6.0, 6.0).unwrap();
    verdict(
        (a - 1.0).abs() <= 1e-12 && b.abs() <= 1e-12,
        format!("gap(2,1) = {a}, gap(6,6) = {b}"),
    )
}

fn milp_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut checked, mut failing) = (0, 0);
    while checked < 50 {
        let template = if checked % 2 == 0 {
            TemplateConfig::tiny()
        } else {
            TemplateConfig::ample_small()
        };
        let problem = Problem::new(random_instance(&template, &mut rng)).unwrap();
        let mut order: Vec<usize> = (0..problem.tasks().len()).collect();
        order.shuffle(&mut rng);
        let DecodeOutcome::Feasible { assignment, .. } = decode(&problem, &Chromosome::new(order))
        else {
            continue;
        };
        checked += 1;
        let model = LpModel::parse(&emit_milp(&problem, &MilpOptions::default()).unwrap()).unwrap();
        let values = assignment_values(&problem, &assignment, MilpMode::Amended)
            .into_iter()
            .collect();
        if !model.violations(&values, 1e-9).is_empty() {
            failing += 1;
        }
    }

    let problem = Problem::new(two_tasks()).unwrap();
    let exact = solve_exact(&problem, 1_000_000).unwrap();
    let values = assignment_values(&problem, &exact.assignment, MilpMode::Amended);
    let text = render_solution(&values, exact.objective);
    let imported = import_solution(&problem, &text, MilpMode::Amended).unwrap();
    let objective = imported.metrics.objective;
    verdict(
        failing == 0 && (objective - 6.0).abs() <= 1e-6,
        format!(
            "{checked} schedules, {failing} violating a row; two-task import objective {objective}"
        ),
    )
}

fn determinism(traces: &mut Traces) -> Verdict {
    let base = seeded_instance(&TemplateConfig::desk(), 9);
    let config = ScenarioConfig {
        seed: 9,
        ..ScenarioConfig::new(base, 1.5, WorkerTightness::Medium)
    };
    let instance = generate_scenarios(&config).unwrap().remove(0).instance;
    let problem = Problem::new(instance).unwrap();
    let run = |workers: usize| {
        let config = GaConfig {
            seed: 31,
            workers,
            mutation_rate: 0.01,
            ..GaConfig::default()
        };
        run_ga(&problem, &config).map(|r| {
            let json = serde_json::to_string_pretty(&r.to_document(&problem)).unwrap();
            (json, r)
        })
    };
    let runs: Vec<_> = [1, 1, 4, 4].into_iter().map(run).collect();
    let jsons: Vec<Option<&String>> = runs.iter().map(|r| r.as_ref().ok().map(|v| &v.0)).collect();
    for (_, r) in runs.iter().flatten() {
        traces.record(r);
    }
    let same = jsons.windows(2).all(|w| w[0] == w[1]);
    verdict(
        same && jsons[0].is_some(),
        format!(
            "4 runs (1,1,4,4 workers), {} bytes each, identical: {same}",
            jsons[0].map_or(0, |j| j.len())
        ),
    )
}

fn scale_smoke(traces: &mut Traces) -> Verdict {
    let instance = seeded_instance(&TemplateConfig::mine_scale(), 1);
    let subtasks: usize = instance.tasks.iter().map(|t| t.subtasks.len()).sum();
    let problem = Problem::new(instance).unwrap();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let clock = Instant::now();
    let result = run_ga(
        &problem,
        &GaConfig {
            seed: 3,
            workers,
            ..GaConfig::default()
        },
    );
    let elapsed = clock.elapsed();
    let outcome = match &result {
        Ok(r) => {
            traces.record(r);
            format!("objective {:.1}", r.objective())
        }
        Err(e) => format!("{e}"),
    };
    verdict(
        result.is_ok() && elapsed < Duration::from_secs(120),
        format!(
            "{} tasks, {subtasks} subtasks, {workers} workers, {outcome}, {:.2}s",
            problem.tasks().len(),
            elapsed.as_secs_f64()
        ),
    )
}

#[test]
fn acceptance() {
    let mut traces = Traces::default();
    let mut results = vec![
        ("decoder feasibility", decoder_feasibility()),
        ("two_tasks reproduction", two_tasks_reproduction()),
        ("oracle equivalence", oracle_equivalence(&mut traces)),
    ];
    results.push(("fitness trend", fitness_trend()));
    results.push(("gap unit check", gap_unit()));
    results.push(("milp round trip", milp_round_trip()));
    results.push(("determinism", determinism(&mut traces)));
    results.push(("scale smoke test", scale_smoke(&mut traces)));
    results.insert(3, ("elitism monotonicity", elitism(&traces)));

    for (name, v) in &results {
        println!(
            "{} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let failed: Vec<_> = results
        .iter()
        .filter(|(_, v)| !v.pass)
        .map(|(n, _)| *n)
        .collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
