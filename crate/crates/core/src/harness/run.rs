use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{StrategyProfile, TeamConfig};
use super::spec::{ExperimentSpec, Template};
use crate::analysis::{
    aggregate, emit_plot_data, joint_utility, pareto_distance, sign_test_table, write_results_csv,
    write_summary_csv, ParetoFrontier, RunResult, SignTest, SummaryRow, DEFAULT_FRONTIER_BUDGET,
};
use crate::domain::{
    build_case_study_domain, generate_profiles, generate_unfiltered, AgentProfile, GenerationConfig,
    Scenario,
};
use crate::error::{Error, Result};
use crate::opponent::{Opponent, OpponentKind};
use crate::protocol::{run_negotiation, Negotiator, NegotiationTranscript, Outcome, TranscriptLevel};
use crate::seed::derive;

const SCENARIO_STREAM: u64 = 1;
const RUN_STREAM: u64 = 2;

/// A generated scenario and the group it belongs to.
#[derive(Clone, Debug)]
pub struct ScenarioCase {
    pub group: String,
    pub scenario: Scenario,
}

/// Generates the scenarios of `spec` in group order. Team-vs-team scenarios
/// get a second team with the opposite predictable preferences.
pub fn generate_scenarios(spec: &ExperimentSpec) -> Result<Vec<ScenarioCase>> {
    let domain = build_case_study_domain();
    let mut base = spec.generation.clone();
    base.n_members = spec.members;
    base.ru = spec.ru[0];
    let mut cases = Vec::with_capacity(spec.groups() * spec.scenarios_per_class);
    for g in 0..spec.groups() {
        for i in 0..spec.scenarios_per_class {
            let seed = derive(spec.seed, &[SCENARIO_STREAM, g as u64, i as u64]);
            let (group, generated, class) = if spec.template == Template::BayesWeights {
                let case = spec.importance_cases[g];
                let config = GenerationConfig {
                    importance: Some(case.team),
                    opponent_importance: Some(case.opponent),
                    ..base.clone()
                };
                (case.to_string(), generate_unfiltered(&domain, &config, seed)?, None)
            } else {
                let class = spec.classes[g];
                (class.to_string(), generate_profiles(&domain, &base, class, seed)?, Some(class))
            };
            let opponent_team = if spec.template == Template::TeamVsTeam {
                let config = GenerationConfig {
                    team_direction: base.team_direction.flip(),
                    ..base.clone()
                };
                let seed = derive(spec.seed, &[SCENARIO_STREAM, g as u64, i as u64, 1]);
                generate_profiles(&domain, &config, class.expect("team-vs-team uses classes"), seed)?.members
            } else {
                Vec::new()
            };
            cases.push(ScenarioCase {
                scenario: Scenario {
                    id: format!("{group}-{i:02}"),
                    similarity: class,
                    dissimilarity: Some(generated.dissimilarity),
                    domain: domain.clone(),
                    team: generated.members,
                    opponent: generated.opponent,
                    opponent_team,
                },
                group,
            });
        }
    }
    Ok(cases)
}

/// What the team side of a run is.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TeamSetup {
    Config(TeamConfig),
    /// Team-vs-team: Bayesian member counts of both teams.
    Profile(StrategyProfile),
}

/// One negotiation of the experiment grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedRun {
    pub scenario: usize,
    pub ru: f64,
    pub opponent: Option<OpponentKind>,
    pub team: TeamSetup,
    pub config_label: String,
    pub rep: usize,
    /// Shared by every configuration on the same scenario, opponent and
    /// repetition, so configurations are compared on matched seeds.
    pub seed: u64,
    pub run_id: String,
}

/// The run grid in output order: scenario, reservation utility, opponent,
/// configuration, repetition.
pub fn plan_runs(spec: &ExperimentSpec, scenarios: &[ScenarioCase]) -> Result<Vec<PlannedRun>> {
    spec.validate()?;
    let opponents: Vec<Option<OpponentKind>> = match spec.template {
        Template::TeamVsTeam => vec![None],
        _ => spec.opponent_kinds()?.into_iter().map(Some).collect(),
    };
    let setups: Vec<(String, TeamSetup)> = match spec.template {
        Template::TeamVsTeam => spec
            .strategy_profiles()?
            .into_iter()
            .map(|p| (p.to_string(), TeamSetup::Profile(p)))
            .collect(),
        _ => spec
            .team_configs()?
            .into_iter()
            .map(|c| (c.to_string(), TeamSetup::Config(c)))
            .collect(),
    };
    let mut runs = Vec::with_capacity(spec.run_count());
    for (s, case) in scenarios.iter().enumerate() {
        for &ru in &spec.ru {
            for (o, opponent) in opponents.iter().enumerate() {
                let opponent_name = opponent.map_or("team".to_string(), |k| k.name());
                for (name, setup) in &setups {
                    let config_label = spec.config_label(name, ru);
                    for rep in 0..spec.repetitions {
                        runs.push(PlannedRun {
                            scenario: s,
                            ru,
                            opponent: *opponent,
                            team: *setup,
                            rep,
                            seed: derive(spec.seed, &[RUN_STREAM, s as u64, o as u64, rep as u64]),
                            run_id: format!("{}.{opponent_name}.{config_label}.{rep:03}", case.scenario.id),
                            config_label: config_label.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(runs)
}

/// Result of one executed run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub result: RunResult,
    pub transcript: NegotiationTranscript,
    /// Description of a broken unanimity guarantee.
    pub violation: Option<String>,
}

fn with_ru(members: &[AgentProfile], ru: f64) -> Result<Vec<AgentProfile>> {
    members
        .iter()
        .map(|m| {
            let mut m = m.clone();
            m.set_ru(ru)?;
            Ok(m)
        })
        .collect()
}

/// Utilities of `party`'s members for `offer`, plus a violation message
/// when the party promised unanimity but a member ends below its
/// reservation utility.
fn settle(party: &dyn Negotiator, offer: &crate::domain::Offer) -> Result<(Vec<f64>, Option<String>)> {
    let mut utilities = Vec::with_capacity(party.members().len());
    let mut broken = Vec::new();
    for (a, m) in party.members().iter().enumerate() {
        let u = m.utility(offer)?;
        if u < m.ru() {
            broken.push(format!("member {a} utility {u} < ru {}", m.ru()));
        }
        utilities.push(u);
    }
    let violation = (party.guarantees_unanimity() && !broken.is_empty())
        .then(|| format!("{}: {}", party.label(), broken.join(", ")));
    Ok((utilities, violation))
}

/// Executes one planned run.
pub fn execute_run(
    spec: &ExperimentSpec,
    case: &ScenarioCase,
    frontier: Option<&ParetoFrontier>,
    run: &PlannedRun,
    level: TranscriptLevel,
) -> Result<RunOutput> {
    let sc = &case.scenario;
    let domain = &sc.domain;
    let members = with_ru(&sc.team, run.ru)?;
    let (mut team, mut other): (Box<dyn Negotiator>, Box<dyn Negotiator>) = match (run.team, run.opponent) {
        (TeamSetup::Config(config), Some(kind)) => (
            config.build(domain, members)?,
            Box::new(Opponent::new(domain, sc.opponent.clone(), kind)?),
        ),
        (TeamSetup::Profile(p), None) => {
            let build = |members: Vec<AgentProfile>, k: usize| -> Result<Box<dyn Negotiator>> {
                if k > members.len() {
                    return Err(Error::ConfigMismatch(format!("profile {p} exceeds the team size")));
                }
                TeamConfig::Mixed { bayesian: k }.build(domain, members)
            };
            if sc.opponent_team.is_empty() {
                return Err(Error::ConfigMismatch(format!("scenario {} has no second team", sc.id)));
            }
            (build(members, p.first)?, build(with_ru(&sc.opponent_team, run.ru)?, p.second)?)
        }
        _ => return Err(Error::ConfigMismatch("team setup does not match the template".into())),
    };
    let transcript = run_negotiation(team.as_mut(), other.as_mut(), spec.deadline, run.seed, &run.run_id, level)?;
    let outcome = transcript.outcome().cloned().expect("the engine always logs an outcome");
    let pruning_ratio = team.forbidden().map_or(0.0, |f| f.pruning_ratio());
    let (member_utilities, opponent_utilities, violation, agreement) = match &outcome {
        Outcome::Agreement { offer, .. } => {
            let (mu, v1) = settle(team.as_ref(), offer)?;
            let (ou, v2) = settle(other.as_ref(), offer)?;
            let violation = match (v1, v2) {
                (None, None) => None,
                (a, b) => Some([a, b].into_iter().flatten().collect::<Vec<_>>().join("; ")),
            };
            (mu, ou, violation, true)
        }
        Outcome::Failure { .. } => (Vec::new(), Vec::new(), None, false),
    };
    let (joint, opp) = if agreement {
        (joint_utility(&member_utilities)?, joint_utility(&opponent_utilities)?)
    } else {
        (0.0, 0.0)
    };
    let result = RunResult {
        run_id: run.run_id.clone(),
        scenario_id: sc.id.clone(),
        scenario_class: case.group.clone(),
        opponent: run.opponent.map_or("team".to_string(), |k| k.name()),
        team_config: run.config_label.clone(),
        rep: run.rep,
        seed: run.seed,
        agreement,
        rounds: outcome.round(),
        member_utilities,
        opponent_utilities,
        joint_utility: joint,
        opponent_utility: opp,
        pruning_ratio,
        pareto_distance: frontier.filter(|_| agreement).map(|f| pareto_distance((joint, opp), f)),
    };
    Ok(RunOutput {
        result,
        transcript,
        violation,
    })
}

/// Frontier of a scenario: team joint utility against the other party's.
pub fn scenario_frontier(case: &ScenarioCase, pr_grid: usize) -> Result<ParetoFrontier> {
    let sc = &case.scenario;
    let other: &[AgentProfile] = if sc.opponent_team.is_empty() {
        std::slice::from_ref(&sc.opponent)
    } else {
        &sc.opponent_team
    };
    ParetoFrontier::compute(&sc.domain, &sc.team, other, pr_grid, DEFAULT_FRONTIER_BUDGET)
}

/// How an experiment is executed and where its files go.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Output directory; nothing is written without one.
    pub out: Option<PathBuf>,
    /// Worker threads; 0 and 1 both run sequentially.
    pub parallel: usize,
    /// Write one full transcript per run.
    pub transcripts: bool,
}

/// A broken unanimity guarantee.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub run_id: String,
    pub detail: String,
    /// Full diagnostic transcript, when an output directory was given.
    pub transcript: Option<PathBuf>,
}

/// Everything an experiment produced.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub results: Vec<RunResult>,
    pub summary: Vec<SummaryRow>,
    /// `(a, b, class, opponent, test)` for every compared pair and cell.
    pub sign_tests: Vec<(String, String, String, String, SignTest)>,
    pub violations: Vec<Violation>,
}

/// File name for a run identifier.
pub fn transcript_file_name(run_id: &str) -> String {
    let safe: String = run_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect();
    format!("{safe}.jsonl")
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads <= 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Runs the whole grid. Output is identical for any number of threads.
pub fn run_experiment(spec: &ExperimentSpec, options: &RunOptions) -> Result<ExperimentReport> {
    spec.validate()?;
    let scenarios = generate_scenarios(spec)?;
    let runs = plan_runs(spec, &scenarios)?;
    let parallel = options.parallel > 1;
    let frontiers: Vec<Option<ParetoFrontier>> = if spec.frontier {
        in_pool(options.parallel, || {
            let compute = |c: &ScenarioCase| scenario_frontier(c, spec.pr_grid).map(Some);
            if parallel {
                scenarios.par_iter().map(compute).collect::<Result<Vec<_>>>()
            } else {
                scenarios.iter().map(compute).collect::<Result<Vec<_>>>()
            }
        })??
    } else {
        vec![None; scenarios.len()]
    };
    let level = if options.transcripts {
        TranscriptLevel::Full
    } else {
        TranscriptLevel::Offers
    };
    let execute = |run: &PlannedRun| {
        execute_run(spec, &scenarios[run.scenario], frontiers[run.scenario].as_ref(), run, level)
    };
    let outputs: Vec<RunOutput> = in_pool(options.parallel, || {
        if parallel {
            runs.par_iter().map(execute).collect::<Result<Vec<_>>>()
        } else {
            runs.iter().map(execute).collect::<Result<Vec<_>>>()
        }
    })??;

    let mut violations = Vec::new();
    for (run, output) in runs.iter().zip(&outputs) {
        if let Some(detail) = &output.violation {
            let transcript = match &options.out {
                Some(out) => {
                    let dir = out.join("violations");
                    fs::create_dir_all(&dir)?;
                    let path = dir.join(transcript_file_name(&run.run_id));
                    let full = execute_run(
                        spec,
                        &scenarios[run.scenario],
                        None,
                        run,
                        TranscriptLevel::Full,
                    )?;
                    full.transcript.write_jsonl(fs::File::create(&path)?)?;
                    Some(path)
                }
                None => None,
            };
            violations.push(Violation {
                run_id: run.run_id.clone(),
                detail: detail.clone(),
                transcript,
            });
        }
    }

    let results: Vec<RunResult> = outputs.iter().map(|o| o.result.clone()).collect();
    let summary = aggregate(&results);
    let mut sign_tests = Vec::new();
    for [a, b] in &spec.compare {
        for (class, opponent, test) in sign_test_table(&results, a, b) {
            sign_tests.push((a.clone(), b.clone(), class, opponent, test));
        }
    }
    let report = ExperimentReport {
        results,
        summary,
        sign_tests,
        violations,
    };
    if let Some(out) = &options.out {
        write_outputs(spec, &scenarios, &outputs, &report, out, options.transcripts)?;
    }
    Ok(report)
}

fn write_outputs(
    spec: &ExperimentSpec,
    scenarios: &[ScenarioCase],
    outputs: &[RunOutput],
    report: &ExperimentReport,
    out: &Path,
    transcripts: bool,
) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join("spec.toml"), spec.to_toml()?)?;
    write_results_csv(&report.results, fs::File::create(out.join("results.csv"))?)?;
    write_summary_csv(&report.summary, fs::File::create(out.join("summary.csv"))?)?;

    let mut tests = csv::Writer::from_path(out.join("sign_tests.csv"))?;
    tests.write_record(["a", "b", "scenario_class", "opponent", "wins", "losses", "ties", "p_value"])?;
    for (a, b, class, opponent, t) in &report.sign_tests {
        tests.write_record([
            a.clone(),
            b.clone(),
            class.clone(),
            opponent.clone(),
            t.wins.to_string(),
            t.losses.to_string(),
            t.ties.to_string(),
            t.p_value.to_string(),
        ])?;
    }
    tests.flush()?;

    emit_plot_data(&report.summary, spec.members, &out.join("plots"))?;
    write_scenarios(scenarios, &out.join("scenarios"))?;
    if transcripts {
        let dir = out.join("transcripts");
        fs::create_dir_all(&dir)?;
        for o in outputs {
            let path = dir.join(transcript_file_name(o.transcript.run_id()));
            o.transcript.write_jsonl(std::io::BufWriter::new(fs::File::create(path)?))?;
        }
    }
    Ok(())
}

/// Writes one JSON file per scenario into `dir`.
pub fn write_scenarios(scenarios: &[ScenarioCase], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for case in scenarios {
        case.scenario.save(&dir.join(format!("{}.json", case.scenario.id)))?;
    }
    Ok(())
}

/// Re-executes one run of the experiment with a full transcript.
pub fn replay(spec: &ExperimentSpec, run_id: &str) -> Result<RunOutput> {
    let scenarios = generate_scenarios(spec)?;
    let runs = plan_runs(spec, &scenarios)?;
    let run = runs
        .iter()
        .find(|r| r.run_id == run_id)
        .ok_or_else(|| Error::Invalid(format!("no run `{run_id}` in this experiment")))?;
    let case = &scenarios[run.scenario];
    let frontier = if spec.frontier {
        Some(scenario_frontier(case, spec.pr_grid)?)
    } else {
        None
    };
    execute_run(spec, case, frontier.as_ref(), run, TranscriptLevel::Full)
}
