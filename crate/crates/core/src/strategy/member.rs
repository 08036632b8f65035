//! Candidate selection for every member strategy.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::BayesianAcceptanceModel;
use crate::domain::{AgentProfile, PartialOffer, RiskAttitude, StrategyParams};
use crate::error::{Error, Result};

/// How a team member picks its candidate partial offer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemberStrategy {
    /// Uniform draw from the candidate pool.
    Basic,
    /// Explores until `t_exp`, then maximizes the weighted acceptance
    /// posteriors of team and opponent, escaping with probability `p_esc`.
    Bayesian,
    /// Explores until `t_exp`, then maximizes the opponent's acceptance
    /// posterior.
    RiskAverse,
    /// Always proposes its own favourite candidate.
    RiskSeeking,
}

impl MemberStrategy {
    pub fn learns(self) -> bool {
        matches!(self, MemberStrategy::Bayesian | MemberStrategy::RiskAverse)
    }

    /// The Bayesian strategy specialised by the member's risk attitude.
    pub fn from_attitude(attitude: RiskAttitude) -> Self {
        match attitude {
            RiskAttitude::Neutral => MemberStrategy::Bayesian,
            RiskAttitude::Averse => MemberStrategy::RiskAverse,
            RiskAttitude::Seeking => MemberStrategy::RiskSeeking,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MemberStrategy::Basic => "basic",
            MemberStrategy::Bayesian => "bayesian",
            MemberStrategy::RiskAverse => "averse",
            MemberStrategy::RiskSeeking => "seeker",
        }
    }
}

impl fmt::Display for MemberStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MemberStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(MemberStrategy::Basic),
            "bayesian" => Ok(MemberStrategy::Bayesian),
            "averse" | "risk-averse" => Ok(MemberStrategy::RiskAverse),
            "seeker" | "seeking" | "risk-seeking" => Ok(MemberStrategy::RiskSeeking),
            other => Err(Error::Invalid(format!("unknown member strategy `{other}`"))),
        }
    }
}

/// A non-empty candidate pool seen through partial-offer ids in canonical
/// order.
pub(crate) trait PoolView {
    fn len(&self) -> usize;
    /// Id of the `k`-th pool element in canonical order.
    fn nth(&self, k: usize) -> usize;
    /// Ids in canonical order.
    fn for_each(&self, f: &mut dyn FnMut(usize));
}

impl PoolView for usize {
    fn len(&self) -> usize {
        *self
    }

    fn nth(&self, k: usize) -> usize {
        k
    }

    fn for_each(&self, f: &mut dyn FnMut(usize)) {
        (0..*self).for_each(f)
    }
}

/// Scores a member consults when picking from the pool.
pub(crate) struct Scores<'a> {
    pub own: &'a dyn Fn(usize) -> f64,
    pub team: &'a dyn Fn(usize) -> f64,
    pub opponent: &'a dyn Fn(usize) -> f64,
}

/// Argmax of `key`, ties to the larger `tie`, then to the smaller id.
fn argmax(pool: &dyn PoolView, key: &dyn Fn(usize) -> f64, tie: &dyn Fn(usize) -> f64) -> usize {
    let mut best: Option<(usize, f64, f64)> = None;
    pool.for_each(&mut |id| {
        let (k, t) = (key(id), tie(id));
        let better = match best {
            None => true,
            Some((_, bk, bt)) => k > bk || (k == bk && t > bt),
        };
        if better {
            best = Some((id, k, t));
        }
    });
    best.expect("pool is non-empty").0
}

fn uniform<R: Rng>(pool: &dyn PoolView, rng: &mut R) -> usize {
    pool.nth(rng.gen_range(0..pool.len()))
}

/// Picks a pool element. The RNG is consumed identically by every strategy
/// while `t < t_exp` (one uniform draw), which makes the learning strategies
/// trace-equivalent to the basic one during exploration.
pub(crate) fn select<R: Rng>(
    strategy: MemberStrategy,
    params: &StrategyParams,
    t: f64,
    pool: &dyn PoolView,
    scores: &Scores<'_>,
    rng: &mut R,
) -> usize {
    let zero = |_: usize| 0.0;
    match strategy {
        MemberStrategy::Basic => uniform(pool, rng),
        MemberStrategy::Bayesian => {
            if t < params.t_exp || rng.gen::<f64>() < params.p_esc {
                uniform(pool, rng)
            } else {
                let key = |id| params.w_a * (scores.team)(id) + params.w_op * (scores.opponent)(id);
                argmax(pool, &key, scores.own)
            }
        }
        MemberStrategy::RiskAverse => {
            if t < params.t_exp {
                uniform(pool, rng)
            } else {
                argmax(pool, scores.opponent, &zero)
            }
        }
        MemberStrategy::RiskSeeking => argmax(pool, scores.own, &zero),
    }
}

/// Bayesian proposal over an explicit pool in canonical order.
pub fn propose_candidate_bayesian<R: Rng>(
    member: &AgentProfile,
    pool: &[PartialOffer],
    team_model: &BayesianAcceptanceModel,
    opponent_model: &BayesianAcceptanceModel,
    t: f64,
    rng: &mut R,
) -> Result<Option<PartialOffer>> {
    propose_with(MemberStrategy::Bayesian, member, pool, team_model, opponent_model, t, rng)
}

/// Risk-averse or risk-seeking proposal over an explicit pool in canonical
/// order. A neutral attitude behaves as [`propose_candidate_bayesian`].
pub fn propose_candidate_risk<R: Rng>(
    member: &AgentProfile,
    pool: &[PartialOffer],
    attitude: RiskAttitude,
    team_model: &BayesianAcceptanceModel,
    opponent_model: &BayesianAcceptanceModel,
    t: f64,
    rng: &mut R,
) -> Result<Option<PartialOffer>> {
    let strategy = MemberStrategy::from_attitude(attitude);
    propose_with(strategy, member, pool, team_model, opponent_model, t, rng)
}

fn propose_with<R: Rng>(
    strategy: MemberStrategy,
    member: &AgentProfile,
    pool: &[PartialOffer],
    team_model: &BayesianAcceptanceModel,
    opponent_model: &BayesianAcceptanceModel,
    t: f64,
    rng: &mut R,
) -> Result<Option<PartialOffer>> {
    if pool.is_empty() {
        return Ok(None);
    }
    let own = pool
        .iter()
        .map(|p| member.partial_utility(p))
        .collect::<Result<Vec<f64>>>()?;
    let team: Vec<f64> = pool.iter().map(|p| team_model.posterior(p)).collect();
    let opp: Vec<f64> = pool.iter().map(|p| opponent_model.posterior(p)).collect();
    let scores = Scores {
        own: &|i| own[i],
        team: &|i| team[i],
        opponent: &|i| opp[i],
    };
    let i = select(strategy, member.strategy(), t, &pool.len(), &scores, rng);
    Ok(Some(pool[i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Issue, IssueKind, NegotiationDomain, Valuation, Value};
    use crate::strategy::ModelTarget;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (AgentProfile, Vec<PartialOffer>) {
        let d = NegotiationDomain::new(vec![Issue::discrete(
            0,
            "x",
            IssueKind::Unpredictable,
            &["a", "b", "c"],
        )])
        .unwrap();
        let p = AgentProfile::new(
            &d,
            vec![1.0],
            vec![Valuation::table(vec![0.2, 1.0, 0.5])],
            0.0,
            1.0,
            StrategyParams::default(),
        )
        .unwrap();
        let pool = (0..3).map(|i| PartialOffer::new(vec![Value::Label(i)])).collect();
        (p, pool)
    }

    fn models() -> (BayesianAcceptanceModel, BayesianAcceptanceModel) {
        (
            BayesianAcceptanceModel::with_cardinalities(ModelTarget::Team, vec![3], 1.0),
            BayesianAcceptanceModel::with_cardinalities(ModelTarget::Opponent, vec![3], 1.0),
        )
    }

    #[test]
    fn seeking_picks_own_favourite() {
        let (p, pool) = setup();
        let (tm, om) = models();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = propose_candidate_risk(&p, &pool, RiskAttitude::Seeking, &tm, &om, 0.1, &mut rng)
            .unwrap()
            .unwrap();
        assert_eq!(x, pool[1]);
    }

    #[test]
    fn averse_follows_the_opponent_model_after_exploration() {
        let (p, pool) = setup();
        let (tm, mut om) = models();
        om.update(&pool[2], true);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = propose_candidate_risk(&p, &pool, RiskAttitude::Averse, &tm, &om, 0.9, &mut rng)
            .unwrap()
            .unwrap();
        assert_eq!(x, pool[2]);
    }

    #[test]
    fn bayesian_argmax_of_weighted_posteriors() {
        let (mut p, pool) = setup();
        p.set_strategy(StrategyParams {
            p_esc: 0.0,
            ..StrategyParams::default()
        })
        .unwrap();
        let (mut tm, mut om) = models();
        tm.update(&pool[0], true);
        om.update(&pool[0], true);
        om.update(&pool[1], false);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = propose_candidate_bayesian(&p, &pool, &tm, &om, 0.8, &mut rng)
            .unwrap()
            .unwrap();
        assert_eq!(x, pool[0]);
    }

    #[test]
    fn exploration_matches_basic_draws() {
        let (p, pool) = setup();
        let (tm, om) = models();
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = propose_candidate_bayesian(&p, &pool, &tm, &om, 0.3, &mut a).unwrap();
            let y = crate::strategy::propose_candidate_basic(&pool, &mut b);
            assert_eq!(x, y);
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            MemberStrategy::Basic,
            MemberStrategy::Bayesian,
            MemberStrategy::RiskAverse,
            MemberStrategy::RiskSeeking,
        ] {
            assert_eq!(s.as_str().parse::<MemberStrategy>().unwrap(), s);
        }
    }
}
