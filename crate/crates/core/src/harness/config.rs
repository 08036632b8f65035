use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{AgentProfile, NegotiationDomain, RiskAttitude};
use crate::error::{Error, Result};
use crate::protocol::{MediatedTeam, Negotiator};
use crate::strategy::{MemberStrategy, SbvTeam};

/// How a team is composed, by identifier:
///
/// | identifier | team |
/// |---|---|
/// | `basic`, `bayesian`, `averse`, `seeker` | every member plays that strategy |
/// | `bayesian:K` | the first `K` members are Bayesian, the rest basic |
/// | `weights:W` | Bayesian members with team-model weight `W` |
/// | `risk-mix` | two neutral Bayesian members, one seeker, one averse |
/// | `sbv` | the similarity Borda voting baseline |
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TeamConfig {
    Uniform(MemberStrategy),
    Mixed { bayesian: usize },
    Weights(f64),
    RiskMix,
    Sbv,
}

impl TeamConfig {
    /// Member strategies for a team of `n`; `None` for the baseline.
    pub fn strategies(&self, n: usize) -> Option<Vec<MemberStrategy>> {
        Some(match *self {
            TeamConfig::Uniform(s) => vec![s; n],
            TeamConfig::Mixed { bayesian } => (0..n)
                .map(|a| {
                    if a < bayesian {
                        MemberStrategy::Bayesian
                    } else {
                        MemberStrategy::Basic
                    }
                })
                .collect(),
            TeamConfig::Weights(_) => vec![MemberStrategy::Bayesian; n],
            TeamConfig::RiskMix => (0..n)
                .map(|a| match n - a {
                    1 => MemberStrategy::RiskAverse,
                    2 => MemberStrategy::RiskSeeking,
                    _ => MemberStrategy::Bayesian,
                })
                .collect(),
            TeamConfig::Sbv => return None,
        })
    }

    /// Builds the team. Members are adjusted to the configuration: weights
    /// are set and risk attitudes follow the member strategies.
    pub fn build(&self, domain: &NegotiationDomain, mut members: Vec<AgentProfile>) -> Result<Box<dyn Negotiator>> {
        let label = format!("team[{self}]");
        let Some(strategies) = self.strategies(members.len()) else {
            return Ok(Box::new(SbvTeam::new(domain, members)?.with_label(label)));
        };
        if let TeamConfig::Mixed { bayesian } = *self {
            if bayesian > members.len() {
                return Err(Error::ConfigMismatch(format!(
                    "{bayesian} Bayesian members requested for a team of {}",
                    members.len()
                )));
            }
        }
        for (m, s) in members.iter_mut().zip(&strategies) {
            let mut params = *m.strategy();
            if let TeamConfig::Weights(w) = *self {
                params = params.with_weights(w);
            }
            params.risk_attitude = match s {
                MemberStrategy::RiskAverse => RiskAttitude::Averse,
                MemberStrategy::RiskSeeking => RiskAttitude::Seeking,
                _ => RiskAttitude::Neutral,
            };
            m.set_strategy(params)?;
        }
        Ok(Box::new(MediatedTeam::new(domain, members, strategies)?.with_label(label)))
    }
}

impl fmt::Display for TeamConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TeamConfig::Uniform(s) => write!(f, "{s}"),
            TeamConfig::Mixed { bayesian } => write!(f, "bayesian:{bayesian}"),
            TeamConfig::Weights(w) => write!(f, "weights:{w}"),
            TeamConfig::RiskMix => f.write_str("risk-mix"),
            TeamConfig::Sbv => f.write_str("sbv"),
        }
    }
}

impl FromStr for TeamConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("unknown team configuration `{s}`"));
        if let Some(k) = s.strip_prefix("bayesian:") {
            return Ok(TeamConfig::Mixed {
                bayesian: k.parse().map_err(|_| bad())?,
            });
        }
        if let Some(w) = s.strip_prefix("weights:") {
            let w: f64 = w.parse().map_err(|_| bad())?;
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::Invalid(format!("team-model weight {w} is outside [0, 1]")));
            }
            return Ok(TeamConfig::Weights(w));
        }
        match s {
            "sbv" => Ok(TeamConfig::Sbv),
            "risk-mix" => Ok(TeamConfig::RiskMix),
            _ => s.parse().map(TeamConfig::Uniform).map_err(|_| bad()),
        }
    }
}

/// Numbers of Bayesian members in two facing teams, written `K-L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub first: usize,
    pub second: usize,
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first, self.second)
    }
}

impl FromStr for StrategyProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| Error::Invalid(format!("strategy profile `{s}` is not of the form K-L")))?;
        let parse = |x: &str| {
            x.parse::<usize>()
                .map_err(|_| Error::Invalid(format!("strategy profile `{s}` is not of the form K-L")))
        };
        Ok(StrategyProfile {
            first: parse(a)?,
            second: parse(b)?,
        })
    }
}
