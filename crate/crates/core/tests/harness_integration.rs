use std::collections::{HashMap, HashSet};
use std::process::Command;

use proptest::prelude::*;
use teamneg::analysis::{RunResult, SummaryRow};
use teamneg::domain::{Scenario, SimilarityClass};
use teamneg::harness::{
    generate_scenarios, plan_runs, replay, run_experiment, ExperimentSpec, RunOptions, Template,
};

fn tiny(template: Template) -> ExperimentSpec {
    let mut s = ExperimentSpec::template(template);
    s.scenarios_per_class = 1;
    s.repetitions = 1;
    s.frontier = false;
    s
}

fn read_csv(path: &std::path::Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(Result::unwrap).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn seeds_are_unique_per_cell_and_shared_across_configs(
        seed in any::<u64>(),
        reps in 1usize..5,
        scenarios in 1usize..3,
        sweep in any::<bool>(),
    ) {
        let mut spec = ExperimentSpec::template(Template::SingleOpponent);
        spec.seed = seed;
        spec.repetitions = reps;
        spec.scenarios_per_class = scenarios;
        spec.teams = vec!["basic".into(), "bayesian".into(), "sbv".into()];
        if sweep {
            spec.ru = vec![0.35, 0.65];
            spec.compare.clear();
        }
        let cases = generate_scenarios(&spec).unwrap();
        let runs = plan_runs(&spec, &cases).unwrap();
        prop_assert_eq!(runs.len(), spec.run_count());
        let mut by_cell: HashMap<(usize, String, usize), u64> = HashMap::new();
        for r in &runs {
            let key = (r.scenario, r.opponent.unwrap().name(), r.rep);
            let s = *by_cell.entry(key).or_insert(r.seed);
            prop_assert_eq!(s, r.seed);
        }
        let distinct: HashSet<u64> = by_cell.values().copied().collect();
        prop_assert_eq!(distinct.len(), by_cell.len());
        let ids: HashSet<&str> = runs.iter().map(|r| r.run_id.as_str()).collect();
        prop_assert_eq!(ids.len(), runs.len());
    }
}

#[test]
fn one_scenario_one_rep_one_config_gives_one_row() {
    let mut spec = tiny(Template::SingleOpponent);
    spec.classes = vec![SimilarityClass::Average];
    spec.opponents = vec!["conceder".into()];
    spec.teams = vec!["basic".into()];
    spec.compare.clear();
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(
        &spec,
        &RunOptions {
            out: Some(dir.path().to_path_buf()),
            ..RunOptions::default()
        },
    )
    .unwrap();
    assert_eq!(report.results.len(), 1);
    assert_eq!(read_csv(&dir.path().join("results.csv")).len(), 1);
    let summary = read_csv(&dir.path().join("summary.csv"));
    assert_eq!(summary.len(), 1);
    assert_eq!(&summary[0][9], "1");
}

#[test]
fn spec_survives_a_toml_round_trip() {
    for t in Template::ALL {
        let spec = ExperimentSpec::template(t);
        let back = ExperimentSpec::from_toml(&spec.to_toml().unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}

#[test]
fn minimal_toml_uses_template_defaults() {
    let spec = ExperimentSpec::from_toml("template = \"reservation-sweep\"\nseed = 9\n").unwrap();
    assert_eq!(spec.seed, 9);
    assert_eq!(spec.ru, vec![0.35, 0.5, 0.65]);
    assert!(ExperimentSpec::from_toml("template = \"single-opponent\"\nbogus = 1\n").is_err());
    assert!(ExperimentSpec::from_toml("template = \"single-opponent\"\nteams = [\"bayesian:9\"]\n").is_err());
}

#[test]
fn replay_reproduces_the_recorded_result() {
    let mut spec = tiny(Template::RiskAttitudes);
    spec.classes = vec![SimilarityClass::Dissimilar];
    spec.teams = vec!["bayesian".into(), "risk-mix".into()];
    spec.compare.clear();
    let report = run_experiment(&spec, &RunOptions::default()).unwrap();
    for r in &report.results {
        let again = replay(&spec, &r.run_id).unwrap();
        assert_eq!(&again.result, r);
        assert!(again.transcript.is_full());
    }
    assert!(replay(&spec, "missing.run").is_err());
}

#[test]
fn team_vs_team_records_both_teams() {
    let spec = tiny(Template::TeamVsTeam);
    let report = run_experiment(&spec, &RunOptions::default()).unwrap();
    assert_eq!(report.results.len(), 3 * 3);
    for r in &report.results {
        assert_eq!(r.opponent, "team");
        assert_eq!(r.opponent_utilities.len(), spec.members);
        if r.agreement {
            assert!(r.member_utilities.iter().chain(&r.opponent_utilities).all(|&u| u >= 0.5));
        }
    }
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_teamneg"))
}

#[test]
fn cli_runs_generates_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("spec.toml");
    std::fs::write(
        &spec_path,
        "template = \"single-opponent\"\nscenarios_per_class = 1\nclasses = [\"similar\"]\nopponents = [\"boulware\"]\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = cli()
        .args(["run", "--spec"])
        .arg(&spec_path)
        .args(["--seed", "3", "--reps", "1", "--grid", "5", "--parallel", "2", "--transcripts", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let results = read_csv(&out.join("results.csv"));
    assert_eq!(results.len(), 2);
    assert_eq!(
        csv::Reader::from_path(out.join("summary.csv")).unwrap().headers().unwrap().iter().collect::<Vec<_>>(),
        SummaryRow::HEADER
    );
    assert_eq!(
        csv::Reader::from_path(out.join("results.csv")).unwrap().headers().unwrap().iter().collect::<Vec<_>>(),
        RunResult::HEADER
    );
    assert_eq!(std::fs::read_dir(out.join("transcripts")).unwrap().count(), 2);
    assert!(out.join("plots").join("pareto_scatter.csv").exists());

    let run_id = results[0][0].to_string();
    let transcript = dir.path().join("replay.jsonl");
    let replayed = cli()
        .args(["replay", "--spec"])
        .arg(&spec_path)
        .args(["--seed", "3", "--reps", "1", "--grid", "5", "--run", &run_id, "--out"])
        .arg(&transcript)
        .output()
        .unwrap();
    assert!(replayed.status.success());
    assert!(std::fs::read_to_string(&transcript).unwrap().lines().count() > 1);

    let scenarios = dir.path().join("scenarios");
    let generated = cli()
        .args(["gen-scenarios", "--template", "team-vs-team", "--seed", "4", "--out"])
        .arg(&scenarios)
        .output()
        .unwrap();
    assert!(generated.status.success());
    let first = std::fs::read_dir(&scenarios).unwrap().next().unwrap().unwrap().path();
    let scenario = Scenario::load(&first).unwrap();
    assert_eq!(scenario.opponent_team.len(), 4);

    let frontier = dir.path().join("frontier.csv");
    let computed = cli()
        .args(["frontier", "--grid", "5", "--spec"])
        .arg(&first)
        .arg("--out")
        .arg(&frontier)
        .output()
        .unwrap();
    assert!(computed.status.success(), "{}", String::from_utf8_lossy(&computed.stderr));
    assert!(!read_csv(&frontier).is_empty());
}

#[test]
fn cli_rejects_bad_input() {
    let bad = cli().args(["run", "--template", "no-such-template"]).output().unwrap();
    assert!(!bad.status.success());
    let missing = cli().args(["run"]).output().unwrap();
    assert!(!missing.status.success());
}
