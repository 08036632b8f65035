use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::aspiration;
use crate::domain::{AgentProfile, NegotiationDomain, Offer, Value, ValueDomain};
use crate::error::{Error, Result};
use crate::protocol::{Actor, EventKind, NegotiationTranscript, Negotiator, Side, VirtualClock};
use crate::sampling::{OfferSampler, Sample, UtilityTable};

/// Random offers each member samples per proposal.
pub const SBV_SEARCH_BUDGET: usize = 5000;

/// Mean per-issue similarity in `[0, 1]`: `1 - |a - b| / span` on real
/// issues, exact match on discrete ones.
pub fn offer_similarity(domain: &NegotiationDomain, a: &Offer, b: &Offer) -> f64 {
    similarity_values(domain, &a.values, &b.values)
}

/// Similarity Borda Voting baseline: every member proposes a full offer at
/// its aspiration that resembles the opponent's last offer, the team picks
/// one by Borda count and accepts incoming offers by unanimity. There is no
/// pre-negotiation, so agreements may leave members below their
/// reservation utility.
#[derive(Clone, Debug)]
pub struct SbvTeam {
    domain: NegotiationDomain,
    members: Vec<AgentProfile>,
    sampler: OfferSampler,
    tables: Vec<UtilityTable>,
    budget: usize,
    label: String,
    side: Side,
    rng: ChaCha8Rng,
    last_received: Option<Offer>,
    last_sent: Option<Offer>,
}

impl SbvTeam {
    pub fn new(domain: &NegotiationDomain, members: Vec<AgentProfile>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::TeamTooSmall { min: 1, got: 0 });
        }
        if let Some(a) = members.iter().position(|m| m.num_issues() != domain.len()) {
            return Err(Error::DomainMismatch(format!("member {a} has the wrong issue count")));
        }
        let sampler = OfferSampler::new(domain)?;
        let tables = members.iter().map(|m| sampler.table(m)).collect();
        Ok(SbvTeam {
            domain: domain.clone(),
            members,
            sampler,
            tables,
            budget: SBV_SEARCH_BUDGET,
            label: "team[sbv]".into(),
            side: Side::Initiator,
            rng: ChaCha8Rng::seed_from_u64(0),
            last_received: None,
            last_sent: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Samples per member proposal; at least 1.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    /// One member's proposal: among samples meeting `s`, the most similar
    /// to the reference offer; without a reference or without any sample
    /// meeting `s`, the best sample for the member.
    fn member_proposal(&mut self, a: usize, s: f64) -> Offer {
        let member = &self.members[a];
        let table = &self.tables[a];
        let reference = self.last_received.as_ref().or(self.last_sent.as_ref());
        let reference = reference.map(|r| Reference::new(&self.domain, &self.sampler, r));
        let mut x = Sample::default();
        let mut best_own: Option<(f64, Sample)> = None;
        let mut best_sim: Option<(f64, Sample)> = None;
        for _ in 0..self.budget {
            self.sampler.draw_above(&mut self.rng, table, f64::NEG_INFINITY, &mut x);
            let u = self.sampler.utility(member, table, &x);
            if u >= s {
                if let Some(r) = &reference {
                    let sim = r.similarity(&self.sampler, &x);
                    if best_sim.as_ref().is_none_or(|(bs, _)| sim > *bs) {
                        best_sim = Some((sim, x.clone()));
                    }
                    continue;
                }
            }
            if best_sim.is_none() && best_own.as_ref().is_none_or(|(bu, _)| u > *bu) {
                best_own = Some((u, x.clone()));
            }
        }
        let (_, x) = best_sim.or(best_own).expect("budget is positive");
        self.sampler.assemble(&x)
    }
}

/// The offer proposals are compared with, split like a sample.
struct Reference {
    codes: Vec<u16>,
    /// `(value, span)` per predictable issue; span 0 for discrete issues.
    pr: Vec<(Value, f64)>,
    n: f64,
}

impl Reference {
    fn new(domain: &NegotiationDomain, sampler: &OfferSampler, offer: &Offer) -> Self {
        let idx = sampler
            .space()
            .index_of_offer(domain.un(), offer)
            .expect("offers are validated against the domain");
        let pr = domain
            .pr()
            .iter()
            .map(|&j| {
                let span = match &domain.issue(j).domain {
                    ValueDomain::Real { lo, hi } => hi - lo,
                    ValueDomain::Discrete { .. } => 0.0,
                };
                (offer.values[j], span)
            })
            .collect();
        Reference {
            codes: sampler.space().codes(idx).to_vec(),
            pr,
            n: domain.len() as f64,
        }
    }

    fn similarity(&self, sampler: &OfferSampler, x: &Sample) -> f64 {
        let mut sum = 0.0;
        for (a, b) in sampler.space().codes(x.idx).iter().zip(&self.codes) {
            sum += (a == b) as u8 as f64;
        }
        for (&v, &(r, span)) in x.pr.iter().zip(&self.pr) {
            sum += match (v, r) {
                (Value::Real(a), Value::Real(b)) => 1.0 - (a - b).abs() / span,
                _ => (v == r) as u8 as f64,
            };
        }
        sum / self.n
    }
}

fn similarity_values(domain: &NegotiationDomain, a: &[Value], b: &[Value]) -> f64 {
    let mut sum = 0.0;
    for (j, (x, y)) in a.iter().zip(b).enumerate() {
        sum += match (&domain.issue(j).domain, x, y) {
            (ValueDomain::Real { lo, hi }, Value::Real(x), Value::Real(y)) => {
                1.0 - (x - y).abs() / (hi - lo)
            }
            _ => (x == y) as u8 as f64,
        };
    }
    sum / a.len() as f64
}

impl Negotiator for SbvTeam {
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
        self.side = side;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.last_received = None;
        self.last_sent = None;
        Ok(true)
    }

    fn propose(&mut self, clock: &VirtualClock, log: &mut NegotiationTranscript) -> Offer {
        let t = clock.t();
        let round = clock.round();
        let n = self.members.len();
        let mut ballot: Vec<Offer> = Vec::with_capacity(n);
        for a in 0..n {
            let s = aspiration(self.members[a].ru(), self.members[a].beta(), t);
            let offer = self.member_proposal(a, s);
            log.push(
                round,
                Actor::member(self.side, a),
                EventKind::SbvProposal {
                    offer: offer.clone(),
                },
            );
            if !ballot.contains(&offer) {
                ballot.push(offer);
            }
        }
        if log.is_full() {
            log.push(
                round,
                Actor::mediator(self.side),
                EventKind::Ballot {
                    candidates: ballot.iter().map(|o| o.values.clone()).collect(),
                },
            );
        }
        let mut totals = vec![0u64; ballot.len()];
        for (a, m) in self.members.iter().enumerate() {
            let utils: Vec<f64> = ballot.iter().map(|o| m.utility_unchecked(&o.values)).collect();
            let mut order: Vec<usize> = (0..ballot.len()).collect();
            order.sort_by(|&x, &y| utils[y].total_cmp(&utils[x]).then_with(|| ballot[x].cmp(&ballot[y])));
            let top = ballot.len() as u32 - 1;
            let mut scores = vec![0u32; ballot.len()];
            for (rank, &i) in order.iter().enumerate() {
                scores[i] = top - rank as u32;
                totals[i] += scores[i] as u64;
            }
            log.push(round, Actor::member(self.side, a), EventKind::BordaScores { scores });
        }
        let max = *totals.iter().max().expect("ballot is non-empty");
        let tied: Vec<usize> = (0..ballot.len()).filter(|&i| totals[i] == max).collect();
        let index = if tied.len() == 1 {
            tied[0]
        } else {
            tied[self.rng.gen_range(0..tied.len())]
        };
        log.push(
            round,
            Actor::mediator(self.side),
            EventKind::BordaWinner {
                index,
                tie: tied.len() > 1,
            },
        );
        let offer = ballot.swap_remove(index);
        self.last_sent = Some(offer.clone());
        offer
    }

    fn respond(&mut self, offer: &Offer, clock: &VirtualClock, log: &mut NegotiationTranscript) -> bool {
        let t = clock.t();
        let mut all = true;
        for (a, m) in self.members.iter().enumerate() {
            let utility = m.utility_unchecked(&offer.values);
            let s = aspiration(m.ru(), m.beta(), t);
            let accept = utility >= s;
            all &= accept;
            log.push(
                clock.round(),
                Actor::member(self.side, a),
                EventKind::Vote {
                    accept,
                    utility,
                    aspiration: s,
                },
            );
        }
        log.push(
            clock.round(),
            Actor::mediator(self.side),
            EventKind::Verdict {
                accept: all,
                auto: false,
            },
        );
        self.last_received = Some(offer.clone());
        all
    }
}
