//! The alternating-offers engine and the mediator's intra-team protocols.

mod clock;
mod engine;
mod forbidden;
mod order;
mod team;
mod transcript;

pub use clock::VirtualClock;
pub use engine::{run_negotiation, Negotiator};
pub use forbidden::TeamForbiddenSet;
pub use order::ConcessionOrder;
pub use team::MediatedTeam;
pub use transcript::{
    Actor, Event, EventKind, FailureReason, NegotiationTranscript, Outcome, Role, Side,
    TranscriptLevel,
};
