//! Weekly maintenance scheduling.
//!
//! Tasks (pieces of equipment) consist of subtasks (work orders) that need
//! workers of given types and, for some tasks, a maintenance bay for the
//! whole time the task is open. A task permutation is turned into a schedule
//! by a greedy serial decoder; a genetic algorithm searches over
//! permutations. An exact branch-and-bound solver and an LP-format MILP
//! export are provided for cross-checking.

pub mod bench;
pub mod decoder;
pub mod evaluator;
pub mod exact;
pub mod fixtures;
pub mod ga;
pub mod milp;
pub mod model;
pub mod scenario;

pub use decoder::{decode, decode_population, Chromosome, DecodeOutcome};
pub use evaluator::{check_schedule, compute_metrics, ScheduleAssignment, ScheduleMetrics};
pub use ga::{run_ga, FitnessKind, GaConfig, GaResult};
pub use model::{load_instance, min_makespan, save_instance, validate_instance, Instance, Problem};
