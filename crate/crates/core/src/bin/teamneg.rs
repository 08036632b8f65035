use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use teamneg::analysis::ParetoFrontier;
use teamneg::domain::Scenario;
use teamneg::harness::{
    generate_scenarios, replay, run_experiment, write_scenarios, ExperimentSpec, RunOptions, Template,
};
use teamneg::protocol::Outcome;

#[derive(Parser)]
#[command(name = "teamneg", version, about = "Mediated negotiation team experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArgs {
    /// Experiment spec (TOML).
    #[arg(long, required_unless_present = "template")]
    spec: Option<PathBuf>,
    /// Use a template's defaults instead of a spec file.
    #[arg(long, conflicts_with = "spec")]
    template: Option<String>,
    /// Overrides the base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of repetitions.
    #[arg(long)]
    reps: Option<usize>,
    /// Overrides the frontier grid per real issue.
    #[arg(long)]
    grid: Option<usize>,
}

impl SpecArgs {
    fn load(&self) -> teamneg::Result<ExperimentSpec> {
        let mut spec = match (&self.spec, &self.template) {
            (Some(path), _) => ExperimentSpec::load(path)?,
            (None, Some(t)) => ExperimentSpec::template(t.parse::<Template>()?),
            (None, None) => unreachable!("clap requires one of them"),
        };
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if let Some(reps) = self.reps {
            spec.repetitions = reps;
        }
        if let Some(grid) = self.grid {
            spec.pr_grid = grid;
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write results, summary and plot data.
    Run {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Write one transcript per run.
        #[arg(long)]
        transcripts: bool,
    },
    /// Generate an experiment's scenarios as JSON files.
    GenScenarios {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "scenarios")]
        out: PathBuf,
    },
    /// Compute the Pareto frontier of a scenario file.
    Frontier {
        /// Scenario (JSON).
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = teamneg::domain::DEFAULT_PR_GRID)]
        grid: usize,
        /// CSV output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-execute one run of an experiment with a full transcript.
    Replay {
        #[command(flatten)]
        spec: SpecArgs,
        /// Run identifier as listed in results.csv.
        #[arg(long)]
        run: String,
        /// Transcript output (JSONL); standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> teamneg::Result<ExitCode> {
    match command {
        Command::Run {
            spec,
            out,
            parallel,
            transcripts,
        } => {
            let spec = spec.load()?;
            eprintln!("{}: {} negotiations", spec.name, spec.run_count());
            let report = run_experiment(
                &spec,
                &RunOptions {
                    out: Some(out.clone()),
                    parallel,
                    transcripts,
                },
            )?;
            println!(
                "{:<28} {:<12} {:<22} {:>8} {:>8} {:>7} {:>6}",
                "group", "opponent", "team", "joint", "opp", "agree", "n"
            );
            for r in &report.summary {
                println!(
                    "{:<28} {:<12} {:<22} {:>8.4} {:>8.4} {:>7.3} {:>6}",
                    r.scenario_class, r.opponent, r.team_config, r.mean_joint, r.mean_opp, r.agreement_rate, r.n
                );
            }
            for (a, b, class, opponent, t) in report.sign_tests.iter().filter(|t| t.2 == "all") {
                let _ = (class, opponent);
                println!(
                    "sign test {a} > {b}: {} wins, {} losses, {} ties, p = {:.4}",
                    t.wins, t.losses, t.ties, t.p_value
                );
            }
            println!("results written to {}", out.display());
            if report.violations.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                for v in &report.violations {
                    eprintln!("unanimity violated in {}: {}", v.run_id, v.detail);
                    if let Some(p) = &v.transcript {
                        eprintln!("  transcript: {}", p.display());
                    }
                }
                Ok(ExitCode::from(2))
            }
        }
        Command::GenScenarios { spec, out } => {
            let spec = spec.load()?;
            let scenarios = generate_scenarios(&spec)?;
            write_scenarios(&scenarios, &out)?;
            for c in &scenarios {
                println!(
                    "{} dissimilarity {:.4}",
                    c.scenario.id,
                    c.scenario.dissimilarity.unwrap_or(0.0)
                );
            }
            println!("{} scenarios written to {}", scenarios.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Frontier { spec, grid, out } => {
            let scenario = Scenario::load(&spec)?;
            let other = if scenario.opponent_team.is_empty() {
                std::slice::from_ref(&scenario.opponent)
            } else {
                scenario.opponent_team.as_slice()
            };
            let frontier = ParetoFrontier::compute(
                &scenario.domain,
                &scenario.team,
                other,
                grid,
                teamneg::analysis::DEFAULT_FRONTIER_BUDGET,
            )?;
            match out {
                Some(path) => {
                    frontier.write_csv(&scenario.domain, std::fs::File::create(&path)?)?;
                    println!("{} frontier points written to {}", frontier.len(), path.display());
                }
                None => frontier.write_csv(&scenario.domain, std::io::stdout().lock())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { spec, run, out } => {
            let spec = spec.load()?;
            let output = replay(&spec, &run)?;
            match out {
                Some(path) => output.transcript.write_jsonl(std::fs::File::create(&path)?)?,
                None => output.transcript.write_jsonl(std::io::stdout().lock())?,
            }
            let r = &output.result;
            let mut err = std::io::stderr().lock();
            match output.transcript.outcome() {
                Some(Outcome::Agreement { round, .. }) => writeln!(
                    err,
                    "{}: agreement in round {round}, joint utility {:.4}, opponent {:.4}",
                    r.run_id, r.joint_utility, r.opponent_utility
                )?,
                _ => writeln!(err, "{}: no agreement", r.run_id)?,
            }
            if let Some(v) = output.violation {
                writeln!(err, "unanimity violated: {v}")?;
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
