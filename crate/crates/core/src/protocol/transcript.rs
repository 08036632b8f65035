use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domain::{Offer, PartialOffer, Value};
use crate::error::{Error, Result};

/// Which party of the bilateral negotiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Initiator,
    Responder,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Initiator => Side::Responder,
            Side::Responder => Side::Initiator,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Initiator => "initiator",
            Side::Responder => "responder",
        }
    }

    /// Party to move in `round`.
    pub fn proposer(round: u32) -> Side {
        if round.is_multiple_of(2) {
            Side::Initiator
        } else {
            Side::Responder
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// The party as a whole (a single agent, or a team's external voice).
    Party,
    Mediator,
    Member(usize),
}

/// Originator of a transcript event. Rendered as `side`, `side/mediator` or
/// `side/member-N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Actor {
    pub side: Side,
    pub role: Role,
}

impl Actor {
    pub fn party(side: Side) -> Self {
        Actor {
            side,
            role: Role::Party,
        }
    }

    pub fn mediator(side: Side) -> Self {
        Actor {
            side,
            role: Role::Mediator,
        }
    }

    pub fn member(side: Side, id: usize) -> Self {
        Actor {
            side,
            role: Role::Member(id),
        }
    }
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.role {
            Role::Party => write!(f, "{}", self.side.as_str()),
            Role::Mediator => write!(f, "{}/mediator", self.side.as_str()),
            Role::Member(i) => write!(f, "{}/member-{i}", self.side.as_str()),
        }
    }
}

impl FromStr for Actor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("malformed actor `{s}`"));
        let (side, rest) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let side = match side {
            "initiator" => Side::Initiator,
            "responder" => Side::Responder,
            _ => return Err(bad()),
        };
        let role = match rest {
            None => Role::Party,
            Some("mediator") => Role::Mediator,
            Some(m) => Role::Member(
                m.strip_prefix("member-")
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(bad)?,
            ),
        };
        Ok(Actor { side, role })
    }
}

impl Serialize for Actor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Actor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// No agreement before the deadline.
    Deadline,
    /// A team's forbidden set covers every partial offer.
    Protocol,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Outcome {
    Agreement {
        offer: Offer,
        round: u32,
        /// Party whose offer was accepted.
        proposer: Side,
    },
    Failure {
        round: u32,
        reason: FailureReason,
    },
}

impl Outcome {
    pub fn agreement(&self) -> Option<&Offer> {
        match self {
            Outcome::Agreement { offer, .. } => Some(offer),
            Outcome::Failure { .. } => None,
        }
    }

    pub fn round(&self) -> u32 {
        match self {
            Outcome::Agreement { round, .. } | Outcome::Failure { round, .. } => *round,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event_kind", content = "payload", rename_all = "kebab-case")]
pub enum EventKind {
    /// An offer sent to the other party.
    Offer { offer: Offer },
    /// A member's unanimity ballot on an incoming offer.
    Vote { accept: bool, utility: f64, aspiration: f64 },
    /// The mediator's decision on an incoming offer; `auto` marks offers
    /// rejected because their partial offer is forbidden.
    Verdict { accept: bool, auto: bool },
    /// A member's unpredictable partial offer for the Borda round.
    Candidate { partial: PartialOffer, fallback: bool },
    /// A member's full-offer proposal in the similarity-voting baseline.
    SbvProposal { offer: Offer },
    /// Deduplicated candidates put to the vote, in first-submission order.
    Ballot { candidates: Vec<Vec<Value>> },
    /// A member's Borda scores, aligned with the ballot.
    BordaScores { scores: Vec<u32> },
    /// Index of the winning ballot entry; `tie` when drawn by lot.
    BordaWinner { index: usize, tie: bool },
    /// A member's demanded value for a predictable issue.
    Demand { issue: usize, value: Value },
    /// Value the mediator assigned to a predictable issue; `for_opponent`
    /// when no team member was left demanding.
    Assign {
        issue: usize,
        value: Value,
        for_opponent: bool,
    },
    Satisfied { satisfied: bool },
    Outcome { outcome: Outcome },
}

impl EventKind {
    /// Offers and outcomes; everything else is intra-team detail.
    pub fn is_essential(&self) -> bool {
        matches!(self, EventKind::Offer { .. } | EventKind::Outcome { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub round: u32,
    pub actor: Actor,
    pub kind: EventKind,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranscriptLevel {
    /// Every intra-team message.
    #[default]
    Full,
    /// Offers and the outcome only.
    Offers,
}

/// Ordered record of one negotiation run.
#[derive(Clone, Debug, PartialEq)]
pub struct NegotiationTranscript {
    run_id: String,
    level: TranscriptLevel,
    events: Vec<Event>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    run_id: &'a str,
    round: u32,
    #[serde(flatten)]
    kind: &'a EventKind,
    actor: Actor,
}

#[derive(Deserialize)]
struct RecordIn {
    run_id: String,
    round: u32,
    #[serde(flatten)]
    kind: EventKind,
    actor: Actor,
}

impl NegotiationTranscript {
    pub fn new(run_id: impl Into<String>, level: TranscriptLevel) -> Self {
        NegotiationTranscript {
            run_id: run_id.into(),
            level,
            events: Vec::new(),
        }
    }

    pub fn run_id(&self) -> &str {
        &self.run_id
    }

    pub fn level(&self) -> TranscriptLevel {
        self.level
    }

    /// Whether non-essential events are kept.
    pub fn is_full(&self) -> bool {
        self.level == TranscriptLevel::Full
    }

    pub fn push(&mut self, round: u32, actor: Actor, kind: EventKind) {
        if self.is_full() || kind.is_essential() {
            self.events.push(Event { round, actor, kind });
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn outcome(&self) -> Option<&Outcome> {
        self.events.iter().rev().find_map(|e| match &e.kind {
            EventKind::Outcome { outcome } => Some(outcome),
            _ => None,
        })
    }

    /// Offers in order, with their sender.
    pub fn offers(&self) -> impl Iterator<Item = (u32, Side, &Offer)> + '_ {
        self.events.iter().filter_map(|e| match &e.kind {
            EventKind::Offer { offer } => Some((e.round, e.actor.side, offer)),
            _ => None,
        })
    }

    /// Offers sent by `side`.
    pub fn offers_from(&self, side: Side) -> Vec<Offer> {
        self.offers()
            .filter(|(_, s, _)| *s == side)
            .map(|(_, _, o)| o.clone())
            .collect()
    }

    /// One JSON object per line with fields `run_id`, `round`, `event_kind`,
    /// `payload` and `actor`.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for e in &self.events {
            let rec = RecordOut {
                run_id: &self.run_id,
                round: e.round,
                kind: &e.kind,
                actor: e.actor,
            };
            serde_json::to_writer(&mut w, &rec)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)?;
        Ok(String::from_utf8(buf).expect("json is utf-8"))
    }

    /// Parses a single-run JSONL transcript. The level is not stored; it is
    /// `Full` exactly when some event is non-essential.
    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut run_id = None;
        let mut events = Vec::new();
        let mut full = false;
        for line in r.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: RecordIn = serde_json::from_str(&line)?;
            match &run_id {
                None => run_id = Some(rec.run_id.clone()),
                Some(id) if *id != rec.run_id => {
                    return Err(Error::Invalid(format!(
                        "transcript mixes runs `{id}` and `{}`",
                        rec.run_id
                    )))
                }
                Some(_) => {}
            }
            full |= !rec.kind.is_essential();
            events.push(Event {
                round: rec.round,
                actor: rec.actor,
                kind: rec.kind,
            });
        }
        Ok(NegotiationTranscript {
            run_id: run_id.unwrap_or_default(),
            level: if full {
                TranscriptLevel::Full
            } else {
                TranscriptLevel::Offers
            },
            events,
        })
    }
}
