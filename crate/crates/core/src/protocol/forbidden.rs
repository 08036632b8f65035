use std::collections::BTreeSet;

use crate::domain::{AgentProfile, NegotiationDomain, PartialOffer, UnSpace};
use crate::error::{Error, Result};

/// Per-member forbidden sets and their union, built at pre-negotiation.
#[derive(Clone, Debug)]
pub struct TeamForbiddenSet {
    space: UnSpace,
    members: Vec<Vec<bool>>,
    union: Vec<bool>,
    size: usize,
}

impl TeamForbiddenSet {
    /// Every member computes its own set; the mediator publishes the union.
    pub fn prenegotiate(team: &[AgentProfile], domain: &NegotiationDomain) -> Result<Self> {
        if team.is_empty() {
            return Err(Error::TeamTooSmall { min: 1, got: 0 });
        }
        let space = domain.un_space()?;
        let members: Vec<Vec<bool>> = team.iter().map(|m| m.forbidden_mask(&space)).collect();
        let mut union = vec![false; space.len()];
        for mask in &members {
            for (u, &f) in union.iter_mut().zip(mask) {
                *u |= f;
            }
        }
        let size = union.iter().filter(|f| **f).count();
        Ok(TeamForbiddenSet {
            space,
            members,
            union,
            size,
        })
    }

    pub fn space(&self) -> &UnSpace {
        &self.space
    }

    /// Number of forbidden partial offers in the union.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Whether every partial offer is forbidden.
    pub fn covers_space(&self) -> bool {
        self.size == self.space.len()
    }

    /// `|F_A| / |UN space|`.
    pub fn pruning_ratio(&self) -> f64 {
        self.size as f64 / self.space.len() as f64
    }

    #[inline]
    pub fn contains_index(&self, idx: usize) -> bool {
        self.union[idx]
    }

    pub fn contains(&self, partial: &PartialOffer) -> bool {
        self.space
            .index_of(partial)
            .map(|i| self.union[i])
            .unwrap_or(false)
    }

    pub fn mask(&self) -> &[bool] {
        &self.union
    }

    pub fn member_mask(&self, member: usize) -> &[bool] {
        &self.members[member]
    }

    pub fn member_set(&self, member: usize) -> BTreeSet<PartialOffer> {
        self.collect(&self.members[member])
    }

    pub fn union_set(&self) -> BTreeSet<PartialOffer> {
        self.collect(&self.union)
    }

    fn collect(&self, mask: &[bool]) -> BTreeSet<PartialOffer> {
        mask.iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(i, _)| self.space.partial(i))
            .collect()
    }
}
