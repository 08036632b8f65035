//! Experiment harness: TOML experiment specs, scenario generation, the
//! seeded run grid, optional parallel execution with ordered merge, and
//! result files.

mod config;
mod run;
mod spec;

pub use config::{StrategyProfile, TeamConfig};
pub use run::{
    execute_run, generate_scenarios, plan_runs, replay, run_experiment,
    scenario_frontier, transcript_file_name, write_scenarios, ExperimentReport, PlannedRun,
    RunOptions, RunOutput, ScenarioCase, TeamSetup, Violation,
};
pub use spec::{ExperimentSpec, ImportanceCase, Template};
