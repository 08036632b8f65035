//! Negotiation domains: issues, offers, additive utility profiles, and the
//! predicates the intra-team protocol is built on.
//!
//! Issues are split into *predictable and compatible* issues (PR), whose value
//! ordering is known and shared by every team member, and *unpredictable*
//! issues (UN), where members may disagree. An assignment of every UN issue is
//! an [`PartialOffer`]; it is the unit of pruning, voting and learning.

mod case_study;
mod generate;
mod profile;
mod scenario;
mod similarity;

pub use case_study::build_case_study_domain;
pub use generate::{
    calibrate_similarity_bands, generate_profiles, generate_unfiltered, GeneratedTeam, GenerationConfig, ImportanceBand,
    SimilarityBands, SimilarityClass,
};
pub use profile::{
    check_pr_compatibility, forbidden_set, is_unanimously_acceptable, AgentProfile, Direction,
    RiskAttitude, StrategyParams, Valuation,
};
pub use scenario::{ProfileRecord, Scenario};
pub use similarity::{
    dissimilarity, team_dissimilarity, unpredictable_importance, DEFAULT_PR_GRID,
};

use std::cmp::Ordering;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    /// Predictable and compatible among team members.
    Predictable,
    Unpredictable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ValueDomain {
    Real { lo: f64, hi: f64 },
    Discrete { labels: Vec<String> },
}

impl ValueDomain {
    pub fn is_real(&self) -> bool {
        matches!(self, ValueDomain::Real { .. })
    }

    /// Number of labels for discrete domains.
    pub fn cardinality(&self) -> Option<usize> {
        match self {
            ValueDomain::Real { .. } => None,
            ValueDomain::Discrete { labels } => Some(labels.len()),
        }
    }

    pub fn contains(&self, value: Value) -> bool {
        match (self, value) {
            (ValueDomain::Real { lo, hi }, Value::Real(x)) => x >= *lo && x <= *hi,
            (ValueDomain::Discrete { labels }, Value::Label(i)) => i < labels.len(),
            _ => false,
        }
    }

    /// Position of `value` in the domain scaled to `[0, 1]`.
    pub fn position(&self, value: Value) -> f64 {
        match (self, value) {
            (ValueDomain::Real { lo, hi }, Value::Real(x)) => (x - lo) / (hi - lo),
            (ValueDomain::Discrete { labels }, Value::Label(i)) if labels.len() > 1 => {
                i as f64 / (labels.len() - 1) as f64
            }
            _ => 0.0,
        }
    }

    /// `n` evenly spaced points for real domains, every label otherwise.
    pub fn grid(&self, n: usize) -> Vec<Value> {
        match self {
            ValueDomain::Real { lo, hi } => {
                let n = n.max(2);
                (0..n)
                    .map(|k| {
                        if k == n - 1 {
                            Value::Real(*hi)
                        } else {
                            Value::Real(lo + k as f64 * (hi - lo) / (n - 1) as f64)
                        }
                    })
                    .collect()
            }
            ValueDomain::Discrete { labels } => (0..labels.len()).map(Value::Label).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    pub id: usize,
    pub name: String,
    pub kind: IssueKind,
    pub domain: ValueDomain,
}

impl Issue {
    pub fn real(id: usize, name: &str, kind: IssueKind, lo: f64, hi: f64) -> Self {
        Issue {
            id,
            name: name.to_string(),
            kind,
            domain: ValueDomain::Real { lo, hi },
        }
    }

    pub fn discrete(id: usize, name: &str, kind: IssueKind, labels: &[&str]) -> Self {
        Issue {
            id,
            name: name.to_string(),
            kind,
            domain: ValueDomain::Discrete {
                labels: labels.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Error::InvalidIssue {
            issue: self.name.clone(),
            reason: reason.to_string(),
        };
        match &self.domain {
            ValueDomain::Real { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(bad("real interval needs finite bounds with lo < hi"));
                }
            }
            ValueDomain::Discrete { labels } => {
                if labels.is_empty() {
                    return Err(bad("discrete domain has no labels"));
                }
                let unique: HashSet<&String> = labels.iter().collect();
                if unique.len() != labels.len() {
                    return Err(bad("discrete labels must be unique"));
                }
            }
        }
        Ok(())
    }
}

/// A single issue value: a point of a real interval or a label index.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    Real(f64),
    Label(usize),
}

impl Value {
    pub fn as_real(self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(x),
            Value::Label(_) => None,
        }
    }

    pub fn as_label(self) -> Option<usize> {
        match self {
            Value::Label(i) => Some(i),
            Value::Real(_) => None,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Label(a), Value::Label(b)) => a.cmp(b),
            (Value::Real(a), Value::Real(b)) => a.total_cmp(b),
            (Value::Label(_), Value::Real(_)) => Ordering::Less,
            (Value::Real(_), Value::Label(_)) => Ordering::Greater,
        }
    }
}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Value::Label(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            Value::Real(x) => {
                1u8.hash(state);
                x.to_bits().hash(state);
            }
        }
    }
}

/// A full offer: one value per issue, in issue order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Offer {
    pub values: Vec<Value>,
}

impl Offer {
    pub fn new(values: Vec<Value>) -> Self {
        Offer { values }
    }
}

/// Assignment of every unpredictable issue, in the domain's UN order.
///
/// Equality, hashing and ordering are value-wise, so the derived ordering is
/// the canonical encoding used for deterministic tie-breaking.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartialOffer {
    pub values: Vec<Value>,
}

impl PartialOffer {
    pub fn new(values: Vec<Value>) -> Self {
        PartialOffer { values }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NegotiationDomain {
    issues: Vec<Issue>,
    #[serde(skip)]
    pr: Vec<usize>,
    #[serde(skip)]
    un: Vec<usize>,
}

impl<'de> Deserialize<'de> for NegotiationDomain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            issues: Vec<Issue>,
        }
        let raw = Raw::deserialize(d)?;
        NegotiationDomain::new(raw.issues).map_err(serde::de::Error::custom)
    }
}

impl NegotiationDomain {
    pub fn new(issues: Vec<Issue>) -> Result<Self> {
        if issues.is_empty() {
            return Err(Error::InvalidDomain("a domain needs at least one issue".into()));
        }
        let mut pr = Vec::new();
        let mut un = Vec::new();
        for (j, issue) in issues.iter().enumerate() {
            if issue.id != j {
                return Err(Error::InvalidIssue {
                    issue: issue.name.clone(),
                    reason: format!("id {} does not match its position {j}", issue.id),
                });
            }
            issue.validate()?;
            match issue.kind {
                IssueKind::Predictable => pr.push(j),
                IssueKind::Unpredictable => un.push(j),
            }
        }
        Ok(NegotiationDomain { issues, pr, un })
    }

    pub fn issues(&self) -> &[Issue] {
        &self.issues
    }

    pub fn issue(&self, j: usize) -> &Issue {
        &self.issues[j]
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    /// Indices of predictable and compatible issues.
    pub fn pr(&self) -> &[usize] {
        &self.pr
    }

    /// Indices of unpredictable issues.
    pub fn un(&self) -> &[usize] {
        &self.un
    }

    pub fn validate_offer(&self, offer: &Offer) -> Result<()> {
        if offer.values.len() != self.issues.len() {
            return Err(Error::DomainMismatch(format!(
                "offer assigns {} issues, domain has {}",
                offer.values.len(),
                self.issues.len()
            )));
        }
        for (issue, &v) in self.issues.iter().zip(&offer.values) {
            if !issue.domain.contains(v) {
                return Err(Error::DomainMismatch(format!(
                    "value {v:?} is outside the domain of `{}`",
                    issue.name
                )));
            }
        }
        Ok(())
    }

    pub fn validate_partial(&self, partial: &PartialOffer) -> Result<()> {
        if partial.values.len() != self.un.len() {
            return Err(Error::DomainMismatch(format!(
                "partial offer assigns {} issues, domain has {} unpredictable issues",
                partial.values.len(),
                self.un.len()
            )));
        }
        for (&j, &v) in self.un.iter().zip(&partial.values) {
            if !self.issues[j].domain.contains(v) {
                return Err(Error::DomainMismatch(format!(
                    "value {v:?} is outside the domain of `{}`",
                    self.issues[j].name
                )));
            }
        }
        Ok(())
    }

    /// The unpredictable partial offer contained in `offer`.
    pub fn project(&self, offer: &Offer) -> PartialOffer {
        PartialOffer::new(self.un.iter().map(|&j| offer.values[j]).collect())
    }

    /// Enumerates the unpredictable partial offers. Every UN issue must be
    /// discrete.
    pub fn un_space(&self) -> Result<UnSpace> {
        UnSpace::new(self)
    }

    /// Human-readable rendering of a value.
    pub fn describe(&self, j: usize, value: Value) -> String {
        match (&self.issues[j].domain, value) {
            (ValueDomain::Discrete { labels }, Value::Label(i)) if i < labels.len() => {
                labels[i].clone()
            }
            (_, Value::Real(x)) => format!("{x:.2}"),
            (_, v) => format!("{v:?}"),
        }
    }
}

/// Mixed-radix enumeration of the unpredictable partial offers.
///
/// The first UN issue is the most significant digit, so index order coincides
/// with the canonical ordering of [`PartialOffer`].
#[derive(Clone, Debug)]
pub struct UnSpace {
    radices: Vec<usize>,
    strides: Vec<usize>,
    codes: Vec<u16>,
    len: usize,
}

impl UnSpace {
    fn new(domain: &NegotiationDomain) -> Result<Self> {
        let mut radices = Vec::with_capacity(domain.un.len());
        for &j in &domain.un {
            match &domain.issues[j].domain {
                ValueDomain::Discrete { labels } => radices.push(labels.len()),
                ValueDomain::Real { .. } => {
                    return Err(Error::UnsupportedDomain(domain.issues[j].name.clone()))
                }
            }
        }
        if radices.iter().any(|&r| r > u16::MAX as usize) {
            return Err(Error::InvalidDomain("too many labels on an issue".into()));
        }
        let len = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Error::InvalidDomain("unpredictable space too large".into()))?;
        let mut strides = vec![1usize; radices.len()];
        for k in (0..radices.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * radices[k + 1];
        }
        let width = radices.len();
        let mut codes = Vec::with_capacity(len * width);
        for idx in 0..len {
            for k in 0..width {
                codes.push(((idx / strides[k]) % radices[k]) as u16);
            }
        }
        Ok(UnSpace {
            radices,
            strides,
            codes,
            len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of unpredictable issues.
    pub fn width(&self) -> usize {
        self.radices.len()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// Label indices of partial offer `idx`, in UN order.
    pub fn codes(&self, idx: usize) -> &[u16] {
        let w = self.radices.len();
        &self.codes[idx * w..(idx + 1) * w]
    }

    pub fn partial(&self, idx: usize) -> PartialOffer {
        PartialOffer::new(
            self.codes(idx)
                .iter()
                .map(|&c| Value::Label(c as usize))
                .collect(),
        )
    }

    pub fn index_of(&self, partial: &PartialOffer) -> Option<usize> {
        if partial.values.len() != self.radices.len() {
            return None;
        }
        let mut idx = 0;
        for (k, v) in partial.values.iter().enumerate() {
            let label = v.as_label()?;
            if label >= self.radices[k] {
                return None;
            }
            idx += label * self.strides[k];
        }
        Some(idx)
    }

    /// Index of the unpredictable projection of a full offer; `un` lists the
    /// domain's UN issue indices.
    pub fn index_of_offer(&self, un: &[usize], offer: &Offer) -> Option<usize> {
        let mut idx = 0;
        for (k, &j) in un.iter().enumerate() {
            let label = offer.values.get(j)?.as_label()?;
            if label >= self.radices[k] {
                return None;
            }
            idx += label * self.strides[k];
        }
        Some(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = PartialOffer> + '_ {
        (0..self.len).map(move |i| self.partial(i))
    }
}
