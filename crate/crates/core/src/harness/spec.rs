use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{StrategyProfile, TeamConfig};
use crate::domain::{GenerationConfig, ImportanceBand, SimilarityClass};
use crate::error::{Error, Result};
use crate::opponent::OpponentKind;
use crate::protocol::VirtualClock;

/// Experiment families. Each fixes what a scenario group is and what the
/// team configurations mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Template {
    /// Teams against single opponents, grouped by similarity class.
    SingleOpponent,
    /// Two mediated teams; configurations are `K-L` strategy profiles.
    TeamVsTeam,
    /// Bayesian weight variants, grouped by unpredictable-importance case.
    BayesWeights,
    /// Teams at several reservation utilities.
    ReservationSweep,
    /// Teams of members with different risk attitudes.
    RiskAttitudes,
}

impl Template {
    pub const ALL: [Template; 5] = [
        Template::SingleOpponent,
        Template::TeamVsTeam,
        Template::BayesWeights,
        Template::ReservationSweep,
        Template::RiskAttitudes,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Template::SingleOpponent => "single-opponent",
            Template::TeamVsTeam => "team-vs-team",
            Template::BayesWeights => "bayes-weights",
            Template::ReservationSweep => "reservation-sweep",
            Template::RiskAttitudes => "risk-attitudes",
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Template::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown template `{s}`")))
    }
}

/// Unpredictable importance of the team and of the opponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportanceCase {
    pub team: ImportanceBand,
    pub opponent: ImportanceBand,
}

impl fmt::Display for ImportanceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "team-{}.opponent-{}", self.team, self.opponent)
    }
}

/// A fully resolved experiment.
///
/// Written as TOML; every field except `template` is optional and defaults
/// per template:
///
/// ```toml
/// template = "single-opponent"
/// name = "learning-vs-basic"
/// seed = 7
/// repetitions = 5
/// scenarios_per_class = 3
/// classes = ["average", "dissimilar"]
/// opponents = ["competitor", "boulware"]
/// teams = ["basic", "bayesian"]
/// compare = [["bayesian", "basic"]]
///
/// [generation]
/// beta_range = [0.5, 1.0]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub template: Template,
    pub name: String,
    pub seed: u64,
    pub repetitions: usize,
    pub deadline: u32,
    /// Scenarios generated per class or importance case.
    pub scenarios_per_class: usize,
    pub classes: Vec<SimilarityClass>,
    /// Scenario groups of the bayes-weights template.
    pub importance_cases: Vec<ImportanceCase>,
    /// Ignored by team-vs-team.
    pub opponents: Vec<String>,
    /// Team configurations, or `K-L` strategy profiles for team-vs-team.
    pub teams: Vec<String>,
    /// Reservation utilities of the team members. With more than one value,
    /// configuration labels get an `@ru=` suffix.
    pub ru: Vec<f64>,
    pub members: usize,
    /// Grid per real issue for Pareto frontiers.
    pub pr_grid: usize,
    /// Whether to compute Pareto distances.
    pub frontier: bool,
    /// Configuration pairs `[a, b]` sign-tested for `a` beating `b`.
    pub compare: Vec<[String; 2]>,
    pub generation: GenerationConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    template: Template,
    name: Option<String>,
    seed: Option<u64>,
    repetitions: Option<usize>,
    deadline: Option<u32>,
    scenarios_per_class: Option<usize>,
    classes: Option<Vec<SimilarityClass>>,
    importance_cases: Option<Vec<ImportanceCase>>,
    opponents: Option<Vec<String>>,
    teams: Option<Vec<String>>,
    ru: Option<Vec<f64>>,
    members: Option<usize>,
    pr_grid: Option<usize>,
    frontier: Option<bool>,
    compare: Option<Vec<[String; 2]>>,
    generation: Option<GenerationConfig>,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn pair(a: &str, b: &str) -> [String; 2] {
    [a.to_string(), b.to_string()]
}

impl ExperimentSpec {
    /// Desk-scale defaults of `template`: 360 negotiations or close.
    pub fn template(template: Template) -> Self {
        let all_opponents: Vec<String> = OpponentKind::ALL.iter().map(|k| k.name()).collect();
        let mut spec = ExperimentSpec {
            template,
            name: template.as_str().to_string(),
            seed: 1,
            repetitions: 5,
            deadline: VirtualClock::DEFAULT_DEADLINE,
            scenarios_per_class: 3,
            classes: SimilarityClass::ALL.to_vec(),
            importance_cases: Vec::new(),
            opponents: all_opponents,
            teams: strings(&["basic", "bayesian"]),
            ru: vec![0.5],
            members: 4,
            pr_grid: crate::domain::DEFAULT_PR_GRID,
            frontier: true,
            compare: vec![pair("bayesian", "basic")],
            generation: GenerationConfig::default(),
        };
        match template {
            Template::SingleOpponent => {}
            Template::TeamVsTeam => {
                spec.scenarios_per_class = 4;
                spec.repetitions = 10;
                spec.opponents = Vec::new();
                spec.teams = strings(&["0-0", "4-0", "4-4"]);
                spec.compare = vec![pair("4-0", "0-0"), pair("4-4", "4-0")];
            }
            Template::BayesWeights => {
                use ImportanceBand::*;
                spec.scenarios_per_class = 2;
                spec.repetitions = 2;
                spec.classes = Vec::new();
                spec.importance_cases = [
                    (High, Low),
                    (High, Average),
                    (Low, Average),
                    (Low, High),
                    (Low, Low),
                    (Average, Average),
                    (High, High),
                ]
                .into_iter()
                .map(|(team, opponent)| ImportanceCase { team, opponent })
                .collect();
                spec.opponents = strings(&["competitor", "matcher", "boulware"]);
                spec.teams = strings(&["weights:0.5", "weights:0.25", "weights:0.75"]);
                spec.compare = vec![pair("weights:0.25", "weights:0.5"), pair("weights:0.75", "weights:0.5")];
            }
            Template::ReservationSweep => {
                spec.scenarios_per_class = 2;
                spec.teams = strings(&["bayesian"]);
                spec.ru = vec![0.35, 0.5, 0.65];
                spec.compare = vec![pair("bayesian@ru=0.65", "bayesian@ru=0.35")];
            }
            Template::RiskAttitudes => {
                spec.repetitions = 2;
                spec.teams = strings(&["bayesian", "seeker", "averse", "risk-mix", "sbv"]);
                spec.opponents = strings(&["competitor", "matcher", "boulware"]);
                spec.compare = vec![pair("bayesian", "sbv"), pair("seeker", "bayesian")];
            }
        }
        spec
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawSpec = toml::from_str(text)?;
        let mut spec = Self::template(raw.template);
        macro_rules! take {
            ($($f:ident),*) => { $(if let Some(v) = raw.$f { spec.$f = v; })* };
        }
        take!(
            name,
            seed,
            repetitions,
            deadline,
            scenarios_per_class,
            classes,
            importance_cases,
            opponents,
            teams,
            ru,
            members,
            pr_grid,
            frontier,
            compare,
            generation
        );
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Invalid(format!("cannot serialize spec: {e}")))
    }

    /// Number of scenario groups: classes, or importance cases for the
    /// bayes-weights template.
    pub fn groups(&self) -> usize {
        match self.template {
            Template::BayesWeights => self.importance_cases.len(),
            _ => self.classes.len(),
        }
    }

    pub fn opponent_kinds(&self) -> Result<Vec<OpponentKind>> {
        self.opponents.iter().map(|o| o.parse()).collect()
    }

    pub fn team_configs(&self) -> Result<Vec<TeamConfig>> {
        self.teams.iter().map(|t| t.parse()).collect()
    }

    pub fn strategy_profiles(&self) -> Result<Vec<StrategyProfile>> {
        self.teams.iter().map(|t| t.parse()).collect()
    }

    /// Label of a team configuration at reservation utility `ru`.
    pub fn config_label(&self, team: &str, ru: f64) -> String {
        if self.ru.len() > 1 {
            format!("{team}@ru={ru}")
        } else {
            team.to_string()
        }
    }

    /// Checks everything that can fail before any run.
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::Invalid(m));
        if self.repetitions == 0 {
            return invalid("repetitions must be at least 1".into());
        }
        if self.scenarios_per_class == 0 {
            return invalid("scenarios_per_class must be at least 1".into());
        }
        if self.members == 0 {
            return Err(Error::TeamTooSmall { min: 1, got: 0 });
        }
        if self.groups() == 0 {
            return invalid(match self.template {
                Template::BayesWeights => "importance_cases is empty".into(),
                _ => "classes is empty".into(),
            });
        }
        if self.teams.is_empty() {
            return invalid("teams is empty".into());
        }
        if self.ru.is_empty() {
            return invalid("ru is empty".into());
        }
        if let Some(ru) = self.ru.iter().find(|ru| !(0.0..=1.0).contains(*ru)) {
            return invalid(format!("reservation utility {ru} is outside [0, 1]"));
        }
        if self.pr_grid < 2 {
            return invalid("pr_grid must be at least 2".into());
        }
        let labels: Vec<String> = if self.template == Template::TeamVsTeam {
            for p in self.strategy_profiles()? {
                if p.first > self.members || p.second > self.members {
                    return Err(Error::ConfigMismatch(format!(
                        "strategy profile {p} exceeds the team size {}",
                        self.members
                    )));
                }
            }
            self.teams.clone()
        } else {
            if self.opponents.is_empty() {
                return invalid("opponents is empty".into());
            }
            self.opponent_kinds()?;
            for c in self.team_configs()? {
                if let TeamConfig::Mixed { bayesian } = c {
                    if bayesian > self.members {
                        return Err(Error::ConfigMismatch(format!(
                            "{bayesian} Bayesian members requested for a team of {}",
                            self.members
                        )));
                    }
                }
            }
            self.ru
                .iter()
                .flat_map(|&ru| self.teams.iter().map(move |t| self.config_label(t, ru)))
                .collect()
        };
        for [a, b] in &self.compare {
            for c in [a, b] {
                if !labels.contains(c) {
                    return invalid(format!("compared configuration `{c}` is not part of the experiment"));
                }
            }
        }
        Ok(())
    }

    /// Total number of negotiations.
    pub fn run_count(&self) -> usize {
        let opponents = match self.template {
            Template::TeamVsTeam => 1,
            _ => self.opponents.len(),
        };
        self.groups() * self.scenarios_per_class * self.ru.len() * opponents * self.teams.len() * self.repetitions
    }
}
