use crate::domain::{AgentProfile, NegotiationDomain, Offer};
use crate::error::{Error, Result};
use crate::seed::mix;

use super::{
    Actor, EventKind, FailureReason, NegotiationTranscript, Outcome, Side, TeamForbiddenSet,
    TranscriptLevel, VirtualClock,
};

/// A party of the bilateral negotiation: a single agent or a mediated team.
pub trait Negotiator {
    /// Short human-readable label.
    fn label(&self) -> String;

    fn domain(&self) -> &NegotiationDomain;

    /// Profiles whose utilities are reported for this party.
    fn members(&self) -> &[AgentProfile];

    /// Resets run state and performs any pre-negotiation. Returns `false`
    /// when the party declines to negotiate.
    fn prepare(&mut self, side: Side, seed: u64, log: &mut NegotiationTranscript) -> Result<bool>;

    fn propose(&mut self, clock: &VirtualClock, log: &mut NegotiationTranscript) -> Offer;

    /// Decides on an incoming offer; `true` accepts it.
    fn respond(&mut self, offer: &Offer, clock: &VirtualClock, log: &mut NegotiationTranscript)
        -> bool;

    /// The other party countered `offer` instead of accepting it.
    fn offer_rejected(&mut self, _offer: &Offer, _clock: &VirtualClock) {}

    /// Whether every agreement is guaranteed to meet every member's
    /// reservation utility.
    fn guarantees_unanimity(&self) -> bool {
        false
    }

    /// Forbidden set computed at pre-negotiation, for mediated teams.
    fn forbidden(&self) -> Option<&TeamForbiddenSet> {
        None
    }
}

/// Runs an alternating-offers negotiation. The initiator proposes in even
/// rounds; the receiver of each offer answers in the same round.
pub fn run_negotiation(
    initiator: &mut dyn Negotiator,
    responder: &mut dyn Negotiator,
    deadline: u32,
    seed: u64,
    run_id: &str,
    level: TranscriptLevel,
) -> Result<NegotiationTranscript> {
    if initiator.domain() != responder.domain() {
        return Err(Error::ConfigMismatch(format!(
            "`{}` and `{}` negotiate over different domains",
            initiator.label(),
            responder.label()
        )));
    }
    let domain = initiator.domain().clone();
    let mut log = NegotiationTranscript::new(run_id, level);
    let fail = |log: &mut NegotiationTranscript, round, reason| {
        log.push(
            round,
            Actor::party(Side::Initiator),
            EventKind::Outcome {
                outcome: Outcome::Failure { round, reason },
            },
        );
    };
    if deadline == 0 {
        fail(&mut log, 0, FailureReason::Deadline);
        return Ok(log);
    }
    let ok_a = initiator.prepare(Side::Initiator, mix(seed, 1), &mut log)?;
    let ok_b = responder.prepare(Side::Responder, mix(seed, 2), &mut log)?;
    if !(ok_a && ok_b) {
        fail(&mut log, 0, FailureReason::Protocol);
        return Ok(log);
    }
    for round in 0..deadline {
        let clock = VirtualClock::at(round, deadline);
        let side = Side::proposer(round);
        let (proposer, receiver): (&mut dyn Negotiator, &mut dyn Negotiator) = match side {
            Side::Initiator => (&mut *initiator, &mut *responder),
            Side::Responder => (&mut *responder, &mut *initiator),
        };
        let offer = proposer.propose(&clock, &mut log);
        domain.validate_offer(&offer)?;
        log.push(round, Actor::party(side), EventKind::Offer { offer: offer.clone() });
        if receiver.respond(&offer, &clock, &mut log) {
            log.push(
                round,
                Actor::party(side.other()),
                EventKind::Outcome {
                    outcome: Outcome::Agreement {
                        offer,
                        round,
                        proposer: side,
                    },
                },
            );
            return Ok(log);
        }
        proposer.offer_rejected(&offer, &clock);
    }
    fail(&mut log, deadline, FailureReason::Deadline);
    Ok(log)
}
