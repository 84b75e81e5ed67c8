//! Small hand-built instances shared by tests, examples and the CLI.

use indexmap::IndexMap;

use crate::model::{Instance, Subtask, Task, WorkerType};

/// Two identical two-step tasks competing for a single worker.
///
/// `task1` is ready at period 0 and `task2` at period 2. Each has a
/// one-period subtask followed by a two-period subtask, both needing one
/// worker. No bays are needed and deadlines are far away.
pub fn two_tasks() -> Instance {
    let two_step = |id: &str, ready, first: &str, second: &str| Task {
        id: id.into(),
        ready_time: ready,
        deadline: 100,
        requires_bay: false,
        makespan_weight: 1.0,
        lateness_weight: 1.0,
        subtasks: vec![
            Subtask {
                id: first.into(),
                duration: 1,
                requirements: IndexMap::from([("worker".to_string(), 1)]),
                predecessors: vec![],
            },
            Subtask {
                id: second.into(),
                duration: 2,
                requirements: IndexMap::from([("worker".to_string(), 1)]),
                predecessors: vec![first.into()],
            },
        ],
    };
    Instance {
        period_minutes: 60,
        horizon_periods: 10,
        num_bays: 1,
        worker_types: vec![WorkerType {
            id: "worker".into(),
            label: "Fitter".into(),
        }],
        availability: IndexMap::from([("worker".to_string(), vec![1; 10])]),
        tasks: vec![
            two_step("task1", 0, "A1", "A2"),
            two_step("task2", 2, "B1", "B2"),
        ],
    }
}
