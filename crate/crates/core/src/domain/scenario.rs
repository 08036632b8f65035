use serde::{Deserialize, Serialize};

use super::{AgentProfile, NegotiationDomain, SimilarityClass, StrategyParams, Valuation};
use crate::error::{Error, Result};

/// Serialized form of an [`AgentProfile`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub weights: Vec<f64>,
    pub valuations: Vec<Valuation>,
    pub ru: f64,
    pub beta: f64,
    #[serde(default)]
    pub strategy: StrategyParams,
}

impl ProfileRecord {
    pub fn from_profile(p: &AgentProfile) -> Self {
        ProfileRecord {
            weights: p.weights().to_vec(),
            valuations: p.valuations().to_vec(),
            ru: p.ru(),
            beta: p.beta(),
            strategy: *p.strategy(),
        }
    }

    pub fn into_profile(self, domain: &NegotiationDomain) -> Result<AgentProfile> {
        AgentProfile::new(
            domain,
            self.weights,
            self.valuations,
            self.ru,
            self.beta,
            self.strategy,
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ScenarioFile {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    similarity: Option<SimilarityClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dissimilarity: Option<f64>,
    domain: NegotiationDomain,
    team: Vec<ProfileRecord>,
    opponent: ProfileRecord,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    opponent_team: Vec<ProfileRecord>,
}

/// A complete negotiation case: the domain, the team, and the other party.
///
/// Stored as one JSON document per scenario. Floats are written in shortest
/// round-trip form, so save/load is lossless.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub similarity: Option<SimilarityClass>,
    pub dissimilarity: Option<f64>,
    pub domain: NegotiationDomain,
    pub team: Vec<AgentProfile>,
    /// The single opposing agent.
    pub opponent: AgentProfile,
    /// Members of the opposing team in team-vs-team cases; empty otherwise.
    pub opponent_team: Vec<AgentProfile>,
}

impl Scenario {
    pub fn to_json(&self) -> Result<String> {
        let file = ScenarioFile {
            id: self.id.clone(),
            similarity: self.similarity,
            dissimilarity: self.dissimilarity,
            domain: self.domain.clone(),
            team: self.team.iter().map(ProfileRecord::from_profile).collect(),
            opponent: ProfileRecord::from_profile(&self.opponent),
            opponent_team: self
                .opponent_team
                .iter()
                .map(ProfileRecord::from_profile)
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        let domain = file.domain;
        let load = |records: Vec<ProfileRecord>| -> Result<Vec<AgentProfile>> {
            records.into_iter().map(|r| r.into_profile(&domain)).collect()
        };
        let team = load(file.team)?;
        if team.is_empty() {
            return Err(Error::TeamTooSmall { min: 1, got: 0 });
        }
        let opponent = file.opponent.into_profile(&domain)?;
        let opponent_team = load(file.opponent_team)?;
        Ok(Scenario {
            id: file.id,
            similarity: file.similarity,
            dissimilarity: file.dissimilarity,
            domain,
            team,
            opponent,
            opponent_team,
        })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
