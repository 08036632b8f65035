use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{check_pr_compatibility, AgentProfile, NegotiationDomain, Offer, UnSpace, Value};
use crate::error::{Error, Result};
use crate::strategy::member::{select, PoolView, Scores};
use crate::strategy::pool::CandidatePool;
use crate::strategy::{
    aspiration, best_for_team, demand_pr_value, is_satisfied, worst_for_team,
    BayesianAcceptanceModel, MemberStrategy, ModelTarget,
};

use super::{
    Actor, ConcessionOrder, EventKind, Negotiator, NegotiationTranscript, Side, TeamForbiddenSet,
    VirtualClock,
};

/// A negotiation team coordinated by a trusted mediator.
///
/// Pre-negotiation publishes the union of the members' forbidden sets; every
/// team offer is built by a Borda vote over the members' unpredictable
/// candidates followed by per-issue demands on the predictable issues, and
/// incoming offers need a unanimous vote. Together these guarantee that any
/// agreement meets every member's reservation utility.
#[derive(Clone, Debug)]
pub struct MediatedTeam {
    domain: NegotiationDomain,
    members: Vec<AgentProfile>,
    strategies: Vec<MemberStrategy>,
    alpha: f64,
    label: String,
    forbidden: TeamForbiddenSet,
    /// Partial utility of every UN index, per member.
    own: Vec<Vec<f64>>,
    pools: Vec<CandidatePool>,
    run: Option<RunState>,
}

#[derive(Clone, Debug)]
struct RunState {
    side: Side,
    rng: ChaCha8Rng,
    pools: Vec<CandidatePool>,
    team_model: BayesianAcceptanceModel,
    opponent_model: BayesianAcceptanceModel,
    /// Posterior tables of (team, opponent) models; dropped on every update.
    posteriors: Option<(Vec<f64>, Vec<f64>)>,
    received: Vec<Offer>,
}

impl MediatedTeam {
    /// Team whose members follow `strategies` (one per member).
    ///
    /// Every predictable issue must be compatible among the members and each
    /// member must score its favourite predictable value exactly 1.
    pub fn new(
        domain: &NegotiationDomain,
        members: Vec<AgentProfile>,
        strategies: Vec<MemberStrategy>,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::TeamTooSmall { min: 1, got: 0 });
        }
        if strategies.len() != members.len() {
            return Err(Error::Invalid(format!(
                "{} strategies for {} members",
                strategies.len(),
                members.len()
            )));
        }
        if !check_pr_compatibility(&members, domain) {
            return Err(Error::Incompatible(
                "predictable issues are not compatible among the members".into(),
            ));
        }
        for (a, m) in members.iter().enumerate() {
            if m.num_issues() != domain.len() {
                return Err(Error::DomainMismatch(format!("member {a} has the wrong issue count")));
            }
            for &j in domain.pr() {
                if m.valuations()[j].max_score() != 1.0 {
                    return Err(Error::InvalidProfile(format!(
                        "member {a} does not score its best value of predictable issue {j} as 1"
                    )));
                }
            }
        }
        let forbidden = TeamForbiddenSet::prenegotiate(&members, domain)?;
        let space = forbidden.space();
        let own: Vec<Vec<f64>> = members
            .iter()
            .map(|m| (0..space.len()).map(|i| m.partial_utility_codes(space.codes(i))).collect())
            .collect();
        let pools = members
            .iter()
            .map(|m| {
                let bc = (0..space.len()).map(|i| m.best_completion_codes(space.codes(i))).collect();
                CandidatePool::new(bc, forbidden.mask())
            })
            .collect();
        let label = describe_strategies(&strategies);
        Ok(MediatedTeam {
            domain: domain.clone(),
            members,
            strategies,
            alpha: BayesianAcceptanceModel::DEFAULT_ALPHA,
            label,
            forbidden,
            own,
            pools,
            run: None,
        })
    }

    /// Team where every member follows `strategy`.
    pub fn uniform(
        domain: &NegotiationDomain,
        members: Vec<AgentProfile>,
        strategy: MemberStrategy,
    ) -> Result<Self> {
        let n = members.len();
        Self::new(domain, members, vec![strategy; n])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Laplace pseudo-count of the acceptance models.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn strategies(&self) -> &[MemberStrategy] {
        &self.strategies
    }

    /// Model of the team's own acceptance, if a run has started.
    pub fn team_model(&self) -> Option<&BayesianAcceptanceModel> {
        self.run.as_ref().map(|r| &r.team_model)
    }

    /// Model of the opponent's acceptance, if a run has started.
    pub fn opponent_model(&self) -> Option<&BayesianAcceptanceModel> {
        self.run.as_ref().map(|r| &r.opponent_model)
    }

    fn space(&self) -> &UnSpace {
        self.forbidden.space()
    }

    fn aspiration(&self, a: usize, t: f64) -> f64 {
        let m = &self.members[a];
        aspiration(m.ru(), m.beta(), t)
    }

    fn index_of(&self, offer: &Offer) -> usize {
        self.space()
            .index_of_offer(self.domain.un(), offer)
            .expect("offers are validated against the domain")
    }

    /// Phase 1: one candidate per member, then a Borda vote. Returns the
    /// winning UN index.
    fn unpredictable_phase(&mut self, clock: &VirtualClock, log: &mut NegotiationTranscript) -> usize {
        let t = clock.t();
        let round = clock.round();
        let n = self.members.len();
        let needs_models = (0..n).any(|a| {
            self.strategies[a].learns() && t >= self.members[a].strategy().t_exp
        });
        let run = self.run.as_mut().expect("prepared");
        let space = self.forbidden.space();
        if needs_models && run.posteriors.is_none() {
            run.posteriors = Some((
                run.team_model.posterior_table(space),
                run.opponent_model.posterior_table(space),
            ));
        }
        let side = run.side;
        let mut candidates: Vec<usize> = Vec::with_capacity(n);
        for a in 0..n {
            let s = aspiration(self.members[a].ru(), self.members[a].beta(), t);
            let pool = &mut run.pools[a];
            pool.update(s);
            let (id, fallback) = if pool.len() == 0 {
                (pool.fallback().expect("some partial offer is allowed"), true)
            } else {
                let own = &self.own[a];
                let (tp, op) = match &run.posteriors {
                    Some((tp, op)) => (tp.as_slice(), op.as_slice()),
                    None => (&[][..], &[][..]),
                };
                let scores = Scores {
                    own: &|i| own[i],
                    team: &|i| tp[i],
                    opponent: &|i| op[i],
                };
                let id = select(
                    self.strategies[a],
                    self.members[a].strategy(),
                    t,
                    &*pool,
                    &scores,
                    &mut run.rng,
                );
                (id, false)
            };
            log.push(
                round,
                Actor::member(side, a),
                EventKind::Candidate {
                    partial: space.partial(id),
                    fallback,
                },
            );
            candidates.push(id);
        }

        let mut ballot: Vec<usize> = Vec::with_capacity(n);
        for id in candidates {
            if !ballot.contains(&id) && !self.forbidden.contains_index(id) {
                ballot.push(id);
            }
        }
        if log.is_full() {
            log.push(
                round,
                Actor::mediator(side),
                EventKind::Ballot {
                    candidates: ballot.iter().map(|&i| space.partial(i).values).collect(),
                },
            );
        }
        let mut totals = vec![0u64; ballot.len()];
        for a in 0..n {
            let own = &self.own[a];
            let mut order: Vec<usize> = (0..ballot.len()).collect();
            order.sort_by(|&x, &y| {
                own[ballot[y]].total_cmp(&own[ballot[x]]).then(ballot[x].cmp(&ballot[y]))
            });
            let mut scores = vec![0u32; ballot.len()];
            let top = ballot.len() as u32 - 1;
            for (rank, &i) in order.iter().enumerate() {
                scores[i] = top - rank as u32;
                totals[i] += scores[i] as u64;
            }
            log.push(round, Actor::member(side, a), EventKind::BordaScores { scores });
        }
        let max = *totals.iter().max().expect("ballot is non-empty");
        let tied: Vec<usize> = (0..ballot.len()).filter(|&i| totals[i] == max).collect();
        let index = if tied.len() == 1 {
            tied[0]
        } else {
            tied[run.rng.gen_range(0..tied.len())]
        };
        log.push(
            round,
            Actor::mediator(side),
            EventKind::BordaWinner {
                index,
                tie: tied.len() > 1,
            },
        );
        let winner = ballot[index];
        run.team_model.update_codes(space.codes(winner), true);
        run.posteriors = None;
        winner
    }

    /// Phase 2: settle the predictable issues in concession order.
    fn predictable_phase(
        &self,
        winner: usize,
        clock: &VirtualClock,
        log: &mut NegotiationTranscript,
    ) -> Offer {
        let run = self.run.as_ref().expect("prepared");
        let round = clock.round();
        let t = clock.t();
        let mut current: Vec<Option<Value>> = vec![None; self.domain.len()];
        for (&j, v) in self.domain.un().iter().zip(self.space().partial(winner).values) {
            current[j] = Some(v);
        }
        let everyone: Vec<&AgentProfile> = self.members.iter().collect();
        let mut remaining: Vec<usize> = (0..self.members.len()).collect();
        let order = ConcessionOrder::from_opponent_offers(&self.domain, &run.received);
        for &j in order.issues() {
            let (value, for_opponent) = if remaining.is_empty() {
                (worst_for_team(&everyone, &self.domain, j), true)
            } else {
                let demands: Vec<Value> = remaining
                    .iter()
                    .map(|&a| {
                        let s = self.aspiration(a, t);
                        let v = demand_pr_value(&self.members[a], j, &current, s);
                        log.push(round, Actor::member(run.side, a), EventKind::Demand { issue: j, value: v });
                        v
                    })
                    .collect();
                (best_for_team(&everyone, j, &demands), false)
            };
            current[j] = Some(value);
            log.push(
                round,
                Actor::mediator(run.side),
                EventKind::Assign {
                    issue: j,
                    value,
                    for_opponent,
                },
            );
            remaining.retain(|&a| {
                let ok = is_satisfied(&self.members[a], &current, self.aspiration(a, t));
                log.push(round, Actor::member(run.side, a), EventKind::Satisfied { satisfied: ok });
                !ok
            });
        }
        Offer::new(current.into_iter().map(|v| v.expect("every issue assigned")).collect())
    }
}

fn describe_strategies(strategies: &[MemberStrategy]) -> String {
    let names: Vec<&str> = strategies.iter().map(|s| s.as_str()).collect();
    format!("team[{}]", names.join(","))
}

impl Negotiator for MediatedTeam {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn domain(&self) -> &NegotiationDomain {
        &self.domain
    }

    fn members(&self) -> &[AgentProfile] {
        &self.members
    }

    fn prepare(&mut self, side: Side, seed: u64, _log: &mut NegotiationTranscript) -> Result<bool> {
        let mut team_model = BayesianAcceptanceModel::new(ModelTarget::Team, &self.domain, self.alpha);
        let opponent_model =
            BayesianAcceptanceModel::new(ModelTarget::Opponent, &self.domain, self.alpha);
        let space = self.forbidden.space();
        for i in (0..space.len()).filter(|&i| self.forbidden.contains_index(i)) {
            team_model.update_codes(space.codes(i), false);
        }
        self.run = Some(RunState {
            side,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pools: self.pools.clone(),
            team_model,
            opponent_model,
            posteriors: None,
            received: Vec::new(),
        });
        // The mediator advises against negotiating when nothing is allowed.
        Ok(!self.forbidden.covers_space())
    }

    fn propose(&mut self, clock: &VirtualClock, log: &mut NegotiationTranscript) -> Offer {
        let winner = self.unpredictable_phase(clock, log);
        self.predictable_phase(winner, clock, log)
    }

    fn respond(&mut self, offer: &Offer, clock: &VirtualClock, log: &mut NegotiationTranscript) -> bool {
        let idx = self.index_of(offer);
        let t = clock.t();
        let round = clock.round();
        let forbidden = self.forbidden.contains_index(idx);
        let accept = if forbidden {
            false
        } else {
            let side = self.run.as_ref().expect("prepared").side;
            let mut all = true;
            for (a, m) in self.members.iter().enumerate() {
                let utility = m.utility_unchecked(&offer.values);
                let s = aspiration(m.ru(), m.beta(), t);
                let accept = utility >= s;
                all &= accept;
                log.push(
                    round,
                    Actor::member(side, a),
                    EventKind::Vote {
                        accept,
                        utility,
                        aspiration: s,
                    },
                );
            }
            all
        };
        let space = self.forbidden.space();
        let run = self.run.as_mut().expect("prepared");
        log.push(
            round,
            Actor::mediator(run.side),
            EventKind::Verdict {
                accept,
                auto: forbidden,
            },
        );
        run.opponent_model.update_codes(space.codes(idx), true);
        if !accept {
            run.team_model.update_codes(space.codes(idx), false);
        }
        run.posteriors = None;
        run.received.push(offer.clone());
        accept
    }

    fn offer_rejected(&mut self, offer: &Offer, _clock: &VirtualClock) {
        let idx = self.index_of(offer);
        let space = self.forbidden.space();
        let run = self.run.as_mut().expect("prepared");
        run.opponent_model.update_codes(space.codes(idx), false);
        run.posteriors = None;
    }

    fn guarantees_unanimity(&self) -> bool {
        true
    }

    fn forbidden(&self) -> Option<&TeamForbiddenSet> {
        Some(&self.forbidden)
    }
}
