//! Two mediated teams negotiate with each other under the strategy profiles
//! 0-0, 4-0 and 4-4 (number of Bayesian members in each team).
//!
//! ```text
//! cargo run --release --example team_vs_team -- [repetitions]
//! ```

use teamneg::analysis::aggregate;
use teamneg::harness::{run_experiment, ExperimentSpec, RunOptions, Template};

fn main() -> teamneg::Result<()> {
    let reps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let mut spec = ExperimentSpec::template(Template::TeamVsTeam);
    spec.repetitions = reps;
    spec.scenarios_per_class = 2;
    spec.frontier = false;
    let report = run_experiment(&spec, &RunOptions::default())?;
    println!("{:<12} {:<8} {:>12} {:>12} {:>8}", "class", "profile", "first team", "second team", "agree");
    for row in aggregate(&report.results) {
        println!(
            "{:<12} {:<8} {:>12.4} {:>12.4} {:>7.0}%",
            row.scenario_class,
            row.team_config,
            row.mean_joint,
            row.mean_opp,
            100.0 * row.agreement_rate
        );
    }
    for (a, b, class, _, t) in report.sign_tests.iter().filter(|t| t.2 == "all") {
        println!("{a} over {b} ({class}): {} wins, {} losses, p = {:.3}", t.wins, t.losses, t.p_value);
    }
    Ok(())
}
