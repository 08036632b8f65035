//! Negotiation teams coordinated by a mediator.
//!
//! A team of agents with partially conflicting preferences negotiates with
//! a single opponent (or another team) under an alternating-offers
//! protocol. The mediator prunes unacceptable partial offers before the
//! negotiation, builds team offers through a Borda vote and per-issue
//! demands, and accepts only unanimously approved offers, so every
//! agreement meets each member's reservation utility.

pub mod analysis;
pub mod domain;
pub mod error;
pub mod harness;
pub mod opponent;
pub mod protocol;
mod sampling;
pub mod seed;
pub mod strategy;

pub use error::{Error, Result};
