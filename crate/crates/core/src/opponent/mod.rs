//! Single-agent opponents: time-based concession, a statistics-driven
//! competitor and a reciprocating matcher.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{AgentProfile, NegotiationDomain, Offer};
use crate::error::{Error, Result};
use crate::protocol::{NegotiationTranscript, Negotiator, Side, VirtualClock};
use crate::sampling::{search_near_target, OfferSampler, Sample, UtilityTable};
use crate::strategy::{aspiration, BayesianAcceptanceModel, ModelTarget};

/// Random offers sampled per proposal.
pub const OPPONENT_SEARCH_BUDGET: usize = 5000;
/// Width of the utility window an opponent aims for above its target.
pub const TARGET_WINDOW: f64 = 0.05;
/// Concession speed of the conceder.
pub const CONCEDER_BETA: f64 = 2.0;
/// Concession speed of the boulware.
pub const BOULWARE_BETA: f64 = 0.2;
/// Standard deviations above the mean received utility the competitor
/// expects the other party could still offer.
pub const COMPETITOR_DELTA: f64 = 1.96;
/// Fraction of the negotiation at the end during which the matcher secures
/// a deal.
pub const MATCHER_ENDGAME: f64 = 0.05;

/// Opponent family and its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum OpponentKind {
    /// Time-based concession with speed `beta`.
    TimeBased { beta: f64 },
    /// Lowers its target toward the best utility it expects from the other
    /// party, estimated from the mean and spread of received offers.
    Competitor,
    /// Concedes in proportion to the other party's observed concession and
    /// picks offers the other party has shown to like.
    Matcher,
}

impl OpponentKind {
    pub const CONCEDER: OpponentKind = OpponentKind::TimeBased { beta: CONCEDER_BETA };
    pub const BOULWARE: OpponentKind = OpponentKind::TimeBased { beta: BOULWARE_BETA };

    /// The four standard opponents.
    pub const ALL: [OpponentKind; 4] = [
        OpponentKind::CONCEDER,
        OpponentKind::BOULWARE,
        OpponentKind::Competitor,
        OpponentKind::Matcher,
    ];

    pub fn name(&self) -> String {
        match *self {
            OpponentKind::TimeBased { beta } if beta == CONCEDER_BETA => "conceder".into(),
            OpponentKind::TimeBased { beta } if beta == BOULWARE_BETA => "boulware".into(),
            OpponentKind::TimeBased { beta } => format!("time:{beta}"),
            OpponentKind::Competitor => "competitor".into(),
            OpponentKind::Matcher => "matcher".into(),
        }
    }
}

impl fmt::Display for OpponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for OpponentKind {
    type Err = Error;

    /// Accepts `conceder`, `boulware`, `competitor`, `matcher` and
    /// `time:<beta>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conceder" => Ok(OpponentKind::CONCEDER),
            "boulware" => Ok(OpponentKind::BOULWARE),
            "competitor" => Ok(OpponentKind::Competitor),
            "matcher" => Ok(OpponentKind::Matcher),
            _ => {
                let beta = s
                    .strip_prefix("time:")
                    .and_then(|b| b.parse::<f64>().ok())
                    .filter(|b| b.is_finite() && *b > 0.0)
                    .ok_or_else(|| Error::Invalid(format!("unknown opponent `{s}`")))?;
                Ok(OpponentKind::TimeBased { beta })
            }
        }
    }
}

/// Target of a time-based opponent.
pub fn time_based_target(ru: f64, beta: f64, t: f64) -> f64 {
    aspiration(ru, beta, t)
}

/// Competitor target for received utilities `received` at time `t`.
pub fn competitor_target(ru: f64, received: &[f64], t: f64) -> f64 {
    let emax = if received.is_empty() {
        0.0
    } else {
        let n = received.len() as f64;
        let mean = received.iter().sum::<f64>() / n;
        let var = received.iter().map(|u| (u - mean).powi(2)).sum::<f64>() / n;
        (mean + COMPETITOR_DELTA * var.sqrt()).min(1.0)
    };
    (1.0 - (1.0 - emax) * t.clamp(0.0, 1.0).powi(5)).clamp(ru, 1.0)
}

/// Matcher target given the own utility of the first and best received
/// offers.
pub fn matcher_target(ru: f64, first: Option<f64>, best: Option<f64>) -> f64 {
    let r = match (first, best) {
        (Some(f), Some(b)) if f < 1.0 => ((b - f) / (1.0 - f)).clamp(0.0, 1.0),
        _ => 0.0,
    };
    (1.0 - r * (1.0 - ru)).clamp(ru, 1.0)
}

/// A single-agent opponent.
#[derive(Clone, Debug)]
pub struct Opponent {
    domain: NegotiationDomain,
    profile: AgentProfile,
    kind: OpponentKind,
    sampler: OfferSampler,
    table: UtilityTable,
    budget: usize,
    rng: ChaCha8Rng,
    /// Own utility of every received offer, in order.
    received: Vec<f64>,
    model: Option<BayesianAcceptanceModel>,
}

impl Opponent {
    pub fn new(domain: &NegotiationDomain, profile: AgentProfile, kind: OpponentKind) -> Result<Self> {
        if profile.num_issues() != domain.len() {
            return Err(Error::DomainMismatch("opponent profile has the wrong issue count".into()));
        }
        if let OpponentKind::TimeBased { beta } = kind {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::Invalid(format!("concession speed {beta} must be > 0")));
            }
        }
        let sampler = OfferSampler::new(domain)?;
        let table = sampler.table(&profile);
        Ok(Opponent {
            domain: domain.clone(),
            profile,
            kind,
            sampler,
            table,
            budget: OPPONENT_SEARCH_BUDGET,
            rng: ChaCha8Rng::seed_from_u64(0),
            received: Vec::new(),
            model: None,
        })
    }

    /// Samples per proposal; at least 1.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn kind(&self) -> OpponentKind {
        self.kind
    }

    pub fn profile(&self) -> &AgentProfile {
        &self.profile
    }

    /// Utility the opponent currently aims for.
    pub fn target(&self, t: f64) -> f64 {
        let ru = self.profile.ru();
        match self.kind {
            OpponentKind::TimeBased { beta } => time_based_target(ru, beta, t),
            OpponentKind::Competitor => competitor_target(ru, &self.received, t),
            OpponentKind::Matcher => {
                let best = self.received.iter().copied().reduce(f64::max);
                matcher_target(ru, self.received.first().copied(), best)
            }
        }
    }

    /// Matcher proposal: the sample meeting the target that the other party
    /// most likely accepts, ties to the higher own utility.
    fn matcher_proposal(&mut self, target: f64) -> Offer {
        let model = self.model.as_ref().expect("prepared");
        let posterior = model.posterior_table(self.sampler.space());
        let mut s = Sample::default();
        let mut best: Option<(f64, f64, Sample)> = None;
        for _ in 0..self.budget {
            if !self.sampler.draw_above(&mut self.rng, &self.table, target, &mut s) {
                continue;
            }
            let u = self.sampler.utility(&self.profile, &self.table, &s);
            if u < target {
                continue;
            }
            let p = posterior[s.idx];
            let better = match &best {
                None => true,
                Some((bp, bu, _)) => p > *bp || (p == *bp && u > *bu),
            };
            if better {
                best = Some((p, u, s.clone()));
            }
        }
        match best {
            Some((_, _, s)) => self.sampler.assemble(&s),
            None => self.profile.optimum(),
        }
    }
}

impl Negotiator for Opponent {
    fn label(&self) -> String {
        self.kind.name()
    }

    fn domain(&self) -> &NegotiationDomain {
        &self.domain
    }

    fn members(&self) -> &[AgentProfile] {
        std::slice::from_ref(&self.profile)
    }

    fn prepare(&mut self, _side: Side, seed: u64, _log: &mut NegotiationTranscript) -> Result<bool> {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.received.clear();
        self.model = match self.kind {
            OpponentKind::Matcher => Some(BayesianAcceptanceModel::new(
                ModelTarget::Opponent,
                &self.domain,
                BayesianAcceptanceModel::DEFAULT_ALPHA,
            )),
            _ => None,
        };
        Ok(true)
    }

    fn propose(&mut self, clock: &VirtualClock, _log: &mut NegotiationTranscript) -> Offer {
        let target = self.target(clock.t());
        match self.kind {
            OpponentKind::Matcher => self.matcher_proposal(target),
            _ => search_near_target(
                &self.sampler,
                &self.profile,
                &self.table,
                target,
                TARGET_WINDOW,
                self.budget,
                &mut self.rng,
            ),
        }
    }

    fn respond(&mut self, offer: &Offer, clock: &VirtualClock, _log: &mut NegotiationTranscript) -> bool {
        let t = clock.t();
        let u = self.profile.utility_unchecked(&offer.values);
        let target = self.target(t);
        let accept = match self.kind {
            OpponentKind::Matcher => {
                let best = self.received.iter().copied().fold(0.0, f64::max);
                u >= target || (t >= 1.0 - MATCHER_ENDGAME && u >= best)
            }
            _ => u >= target,
        };
        if let Some(model) = self.model.as_mut() {
            model.update(&self.domain.project(offer), true);
        }
        self.received.push(u);
        accept
    }
}
