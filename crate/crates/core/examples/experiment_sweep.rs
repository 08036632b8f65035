//! Runs the reservation-utility sweep through the experiment harness and
//! writes results, summary, sign tests and plot data to a directory.
//!
//! ```text
//! cargo run --release --example experiment_sweep -- [out-dir] [threads]
//! ```

use std::path::PathBuf;

use teamneg::harness::{run_experiment, ExperimentSpec, RunOptions, Template};

fn main() -> teamneg::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "sweep-out".into()));
    let parallel = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut spec = ExperimentSpec::template(Template::ReservationSweep);
    spec.repetitions = 2;
    spec.opponents = vec!["conceder".into(), "competitor".into()];
    println!("{}", spec.to_toml()?);
    let report = run_experiment(
        &spec,
        &RunOptions {
            out: Some(out.clone()),
            parallel,
            transcripts: false,
        },
    )?;
    for row in &report.summary {
        println!(
            "{:<11} {:<11} {:<18} joint {:.4} agree {:>5.1}% rounds {:>6.1}",
            row.scenario_class,
            row.opponent,
            row.team_config,
            row.mean_joint,
            100.0 * row.agreement_rate,
            row.mean_rounds
        );
    }
    for (a, b, class, opponent, t) in &report.sign_tests {
        println!("{a} > {b} [{class}/{opponent}]: {}-{}-{} p = {:.4}", t.wins, t.losses, t.ties, t.p_value);
    }
    println!("{} runs written to {}", report.results.len(), out.display());
    Ok(())
}
