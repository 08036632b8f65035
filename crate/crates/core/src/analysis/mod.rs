//! Post-run metrics: team joint utility, Pareto frontier and distance,
//! aggregation across repetitions, paired sign tests and plot-ready tables.

mod frontier;
mod stats;

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use frontier::{pareto_distance, ParetoFrontier, DEFAULT_FRONTIER_BUDGET};
pub use stats::{bootstrap_mean_ci, sign_test, SignTest};

use crate::error::{Error, Result};

/// Product of the members' utilities.
pub fn joint_utility(member_utilities: &[f64]) -> Result<f64> {
    if member_utilities.is_empty() {
        return Err(Error::Invalid("joint utility of an empty team".into()));
    }
    Ok(member_utilities.iter().product())
}

/// One negotiation of an experiment.
///
/// On failure the utility fields are 0 and `pareto_distance` is `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run_id: String,
    pub scenario_id: String,
    pub scenario_class: String,
    pub opponent: String,
    pub team_config: String,
    pub rep: usize,
    pub seed: u64,
    pub agreement: bool,
    /// Round of the agreement, or the deadline.
    pub rounds: u32,
    pub member_utilities: Vec<f64>,
    /// Utilities of the other party's members; one entry for a single agent.
    pub opponent_utilities: Vec<f64>,
    pub joint_utility: f64,
    /// Joint utility of the other party.
    pub opponent_utility: f64,
    pub pruning_ratio: f64,
    pub pareto_distance: Option<f64>,
}

impl RunResult {
    pub const HEADER: [&'static str; 15] = [
        "run_id",
        "scenario_id",
        "scenario_class",
        "opponent",
        "team_config",
        "rep",
        "seed",
        "agreement",
        "rounds",
        "member_utilities",
        "opponent_utilities",
        "joint_utility",
        "opponent_utility",
        "pruning_ratio",
        "pareto_distance",
    ];

    fn record(&self) -> Vec<String> {
        let list = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        vec![
            self.run_id.clone(),
            self.scenario_id.clone(),
            self.scenario_class.clone(),
            self.opponent.clone(),
            self.team_config.clone(),
            self.rep.to_string(),
            self.seed.to_string(),
            self.agreement.to_string(),
            self.rounds.to_string(),
            list(&self.member_utilities),
            list(&self.opponent_utilities),
            self.joint_utility.to_string(),
            self.opponent_utility.to_string(),
            self.pruning_ratio.to_string(),
            self.pareto_distance.map(|d| d.to_string()).unwrap_or_default(),
        ]
    }

    /// Key shared by runs that differ only in the team configuration.
    pub fn pair_key(&self) -> (String, String, usize) {
        (self.scenario_id.clone(), self.opponent.clone(), self.rep)
    }
}

pub fn write_results_csv<W: Write>(results: &[RunResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RunResult::HEADER)?;
    for r in results {
        out.write_record(r.record())?;
    }
    out.flush()?;
    Ok(())
}

/// Aggregate of one (scenario class, opponent, team configuration) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario_class: String,
    pub opponent: String,
    pub team_config: String,
    pub mean_joint: f64,
    /// Population standard deviation.
    pub std_joint: f64,
    pub mean_opp: f64,
    /// Over agreements only; `None` without any.
    pub mean_pareto_dist: Option<f64>,
    pub agreement_rate: f64,
    pub mean_rounds: f64,
    pub n: usize,
}

impl SummaryRow {
    pub const HEADER: [&'static str; 10] = [
        "scenario_class",
        "opponent",
        "team_config",
        "mean_joint",
        "std_joint",
        "mean_opp",
        "mean_pareto_dist",
        "agreement_rate",
        "mean_rounds",
        "n",
    ];

    fn record(&self) -> Vec<String> {
        vec![
            self.scenario_class.clone(),
            self.opponent.clone(),
            self.team_config.clone(),
            self.mean_joint.to_string(),
            self.std_joint.to_string(),
            self.mean_opp.to_string(),
            self.mean_pareto_dist.map(|d| d.to_string()).unwrap_or_default(),
            self.agreement_rate.to_string(),
            self.mean_rounds.to_string(),
            self.n.to_string(),
        ]
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Groups results by (class, opponent, config) in first-appearance order.
pub fn aggregate(results: &[RunResult]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, String, String)> = Vec::new();
    let mut groups: HashMap<(String, String, String), Vec<&RunResult>> = HashMap::new();
    for r in results {
        let key = (r.scenario_class.clone(), r.opponent.clone(), r.team_config.clone());
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let rs = &groups[&key];
            let joint: Vec<f64> = rs.iter().map(|r| r.joint_utility).collect();
            let m = mean(&joint);
            let var = joint.iter().map(|x| (x - m).powi(2)).sum::<f64>() / joint.len() as f64;
            let dists: Vec<f64> = rs.iter().filter_map(|r| r.pareto_distance).collect();
            let agreements = rs.iter().filter(|r| r.agreement).count();
            SummaryRow {
                scenario_class: key.0,
                opponent: key.1,
                team_config: key.2,
                mean_joint: m,
                std_joint: var.sqrt(),
                mean_opp: mean(&rs.iter().map(|r| r.opponent_utility).collect::<Vec<_>>()),
                mean_pareto_dist: (!dists.is_empty()).then(|| mean(&dists)),
                agreement_rate: agreements as f64 / rs.len() as f64,
                mean_rounds: mean(&rs.iter().map(|r| r.rounds as f64).collect::<Vec<_>>()),
                n: rs.len(),
            }
        })
        .collect()
}

pub fn write_summary_csv<W: Write>(summary: &[SummaryRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SummaryRow::HEADER)?;
    for row in summary {
        out.write_record(row.record())?;
    }
    out.flush()?;
    Ok(())
}

/// Joint utilities of `a` and `b` on runs matched by [`RunResult::pair_key`],
/// optionally restricted to rows accepted by `filter`. Pairs come out in the
/// order of `a`'s runs.
pub fn matched_pairs(
    results: &[RunResult],
    a: &str,
    b: &str,
    filter: impl Fn(&RunResult) -> bool,
) -> Vec<(f64, f64)> {
    let others: HashMap<_, f64> = results
        .iter()
        .filter(|r| r.team_config == b && filter(r))
        .map(|r| (r.pair_key(), r.joint_utility))
        .collect();
    results
        .iter()
        .filter(|r| r.team_config == a && filter(r))
        .filter_map(|r| others.get(&r.pair_key()).map(|&u| (r.joint_utility, u)))
        .collect()
}

/// Paired sign test of `a` over `b` on joint utility.
pub fn paired_sign_test(results: &[RunResult], a: &str, b: &str) -> SignTest {
    sign_test(&matched_pairs(results, a, b, |_| true))
}

/// One sign test per (class, opponent) cell plus an `all` row.
pub fn sign_test_table(results: &[RunResult], a: &str, b: &str) -> Vec<(String, String, SignTest)> {
    let mut cells: BTreeMap<(String, String), ()> = BTreeMap::new();
    for r in results.iter().filter(|r| r.team_config == a) {
        cells.insert((r.scenario_class.clone(), r.opponent.clone()), ());
    }
    let mut rows: Vec<(String, String, SignTest)> = cells
        .into_keys()
        .map(|(c, o)| {
            let pairs = matched_pairs(results, a, b, |r| r.scenario_class == c && r.opponent == o);
            (c, o, sign_test(&pairs))
        })
        .collect();
    rows.push(("all".into(), "all".into(), paired_sign_test(results, a, b)));
    rows
}

/// Configuration label of a team with `k` Bayesian members out of `m`, as
/// used by the mixed-team sweep.
pub fn mixed_team_label(k: usize) -> String {
    format!("bayesian:{k}")
}

/// Writes plot-ready tables into `dir`:
///
/// * `pareto_scatter.csv` with the square root of the mean joint utility;
/// * `bayesian_members.csv` with one row per `k` in `0..=members` for every
///   (class, opponent) cell that ran any mixed team.
pub fn emit_plot_data(summary: &[SummaryRow], members: usize, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut scatter = csv::Writer::from_path(dir.join("pareto_scatter.csv"))?;
    scatter.write_record([
        "scenario_class",
        "opponent",
        "team_config",
        "mean_joint",
        "sqrt_mean_joint",
        "mean_opp",
    ])?;
    for row in summary {
        scatter.write_record([
            row.scenario_class.clone(),
            row.opponent.clone(),
            row.team_config.clone(),
            row.mean_joint.to_string(),
            row.mean_joint.sqrt().to_string(),
            row.mean_opp.to_string(),
        ])?;
    }
    scatter.flush()?;

    let mut sweep = csv::Writer::from_path(dir.join("bayesian_members.csv"))?;
    sweep.write_record(["scenario_class", "opponent", "k", "mean_joint", "mean_opp"])?;
    let labels: Vec<String> = (0..=members).map(mixed_team_label).collect();
    let mut cells: Vec<(&str, &str)> = Vec::new();
    for row in summary.iter().filter(|r| labels.contains(&r.team_config)) {
        let cell = (row.scenario_class.as_str(), row.opponent.as_str());
        if !cells.contains(&cell) {
            cells.push(cell);
        }
    }
    for (class, opponent) in cells {
        for (k, label) in labels.iter().enumerate() {
            let row = summary
                .iter()
                .find(|r| r.scenario_class == class && r.opponent == opponent && &r.team_config == label);
            let num = |f: fn(&SummaryRow) -> f64| row.map(|r| f(r).to_string()).unwrap_or_default();
            sweep.write_record([
                class.to_string(),
                opponent.to_string(),
                k.to_string(),
                num(|r| r.mean_joint),
                num(|r| r.mean_opp),
            ])?;
        }
    }
    sweep.flush()?;
    Ok(())
}
