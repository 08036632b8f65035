use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{IssueKind, NegotiationDomain, Offer, PartialOffer, UnSpace, Value, ValueDomain};
use crate::error::{Error, Result};

/// Tolerance on the sum of issue weights.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Which end of an ordered domain a party prefers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Higher values (later labels) are better.
    Increasing,
    /// Lower values (earlier labels) are better.
    Decreasing,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
        }
    }
}

/// Per-issue scoring function `V_j : x_j -> [0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum Valuation {
    /// Linear between the anchors `(lo, at_lo)` and `(hi, at_hi)`.
    Linear {
        lo: f64,
        at_lo: f64,
        hi: f64,
        at_hi: f64,
    },
    /// Score per label.
    Table { scores: Vec<f64> },
}

impl Valuation {
    /// Linear valuation over `[lo, hi]` scoring 1 at the preferred end and 0
    /// at the other.
    pub fn linear(lo: f64, hi: f64, direction: Direction) -> Self {
        let (at_lo, at_hi) = match direction {
            Direction::Increasing => (0.0, 1.0),
            Direction::Decreasing => (1.0, 0.0),
        };
        Valuation::Linear { lo, at_lo, hi, at_hi }
    }

    pub fn table(scores: Vec<f64>) -> Self {
        Valuation::Table { scores }
    }

    #[inline]
    pub fn score(&self, value: Value) -> f64 {
        match (self, value) {
            (
                Valuation::Linear {
                    lo,
                    at_lo,
                    hi,
                    at_hi,
                },
                Value::Real(x),
            ) => {
                let f = (x - lo) / (hi - lo);
                // Exact at both anchors.
                at_lo * (1.0 - f) + at_hi * f
            }
            (Valuation::Table { scores }, Value::Label(i)) => scores[i],
            _ => 0.0,
        }
    }

    /// Direction of a linear valuation, `None` when flat or discrete.
    pub fn direction(&self) -> Option<Direction> {
        match self {
            Valuation::Linear { at_lo, at_hi, .. } if at_hi > at_lo => Some(Direction::Increasing),
            Valuation::Linear { at_lo, at_hi, .. } if at_hi < at_lo => Some(Direction::Decreasing),
            _ => None,
        }
    }

    /// Highest-scoring value (lowest label on ties, `lo` for flat lines).
    pub fn best_value(&self) -> Value {
        match self {
            Valuation::Linear {
                lo, at_lo, hi, at_hi, ..
            } => {
                if at_hi > at_lo {
                    Value::Real(*hi)
                } else {
                    Value::Real(*lo)
                }
            }
            Valuation::Table { scores } => Value::Label(argmax(scores)),
        }
    }

    /// Lowest-scoring value.
    pub fn worst_value(&self) -> Value {
        match self {
            Valuation::Linear {
                lo, at_lo, hi, at_hi, ..
            } => {
                if at_hi < at_lo {
                    Value::Real(*hi)
                } else {
                    Value::Real(*lo)
                }
            }
            Valuation::Table { scores } => {
                let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
                Value::Label(argmax(&neg))
            }
        }
    }

    pub fn max_score(&self) -> f64 {
        self.score(self.best_value())
    }

    fn validate(&self, issue: &super::Issue) -> Result<()> {
        let bad = |m: String| Error::InvalidProfile(format!("issue `{}`: {m}", issue.name));
        match (self, &issue.domain) {
            (
                Valuation::Linear {
                    lo,
                    at_lo,
                    hi,
                    at_hi,
                },
                ValueDomain::Real { lo: dlo, hi: dhi },
            ) => {
                if lo != dlo || hi != dhi {
                    return Err(bad(format!(
                        "linear anchors at [{lo}, {hi}] but the domain is [{dlo}, {dhi}]"
                    )));
                }
                for v in [at_lo, at_hi] {
                    if !(0.0..=1.0).contains(v) {
                        return Err(bad(format!("anchor score {v} outside [0, 1]")));
                    }
                }
            }
            (Valuation::Table { scores }, ValueDomain::Discrete { labels }) => {
                if scores.len() != labels.len() {
                    return Err(bad(format!(
                        "{} scores for {} labels",
                        scores.len(),
                        labels.len()
                    )));
                }
                if let Some(s) = scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
                    return Err(bad(format!("score {s} outside [0, 1]")));
                }
            }
            _ => return Err(bad("valuation form does not match the issue domain".into())),
        }
        Ok(())
    }
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RiskAttitude {
    #[default]
    Neutral,
    Averse,
    Seeking,
}

/// Parameters of the learning member strategies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyParams {
    /// Fraction of the negotiation spent exploring before models are used.
    pub t_exp: f64,
    /// Probability of ignoring the models after `t_exp`.
    pub p_esc: f64,
    /// Weight on the team acceptance model.
    pub w_a: f64,
    /// Weight on the opponent acceptance model.
    pub w_op: f64,
    pub risk_attitude: RiskAttitude,
}

impl Default for StrategyParams {
    fn default() -> Self {
        StrategyParams {
            t_exp: 0.7,
            p_esc: 0.3,
            w_a: 0.5,
            w_op: 0.5,
            risk_attitude: RiskAttitude::Neutral,
        }
    }
}

impl StrategyParams {
    pub fn with_weights(mut self, w_a: f64) -> Self {
        self.w_a = w_a;
        self.w_op = 1.0 - w_a;
        self
    }

    fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidProfile(format!("{name} = {v} is outside [0, 1]")))
            }
        };
        unit("t_exp", self.t_exp)?;
        unit("p_esc", self.p_esc)?;
        unit("w_a", self.w_a)?;
        unit("w_op", self.w_op)?;
        if (self.w_a + self.w_op - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidProfile(format!(
                "w_a + w_op = {} (must be 1)",
                self.w_a + self.w_op
            )));
        }
        Ok(())
    }
}

/// An agent's private preferences: an additive utility function over the
/// domain, a reservation utility and a concession speed.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentProfile {
    weights: Vec<f64>,
    valuations: Vec<Valuation>,
    ru: f64,
    beta: f64,
    strategy: StrategyParams,
    pr: Vec<usize>,
    un: Vec<usize>,
}

impl AgentProfile {
    pub fn new(
        domain: &NegotiationDomain,
        weights: Vec<f64>,
        valuations: Vec<Valuation>,
        ru: f64,
        beta: f64,
        strategy: StrategyParams,
    ) -> Result<Self> {
        if weights.len() != domain.len() || valuations.len() != domain.len() {
            return Err(Error::InvalidProfile(format!(
                "{} weights and {} valuations for {} issues",
                weights.len(),
                valuations.len(),
                domain.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidProfile(format!("weight {w} is negative or not finite")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidProfile(format!("weights sum to {sum}, not 1")));
        }
        // Only renormalize visibly-off sums so already normalized files
        // round-trip bit for bit.
        let weights = if (sum - 1.0).abs() > 4.0 * f64::EPSILON {
            weights.iter().map(|w| w / sum).collect()
        } else {
            weights
        };
        for (issue, v) in domain.issues().iter().zip(&valuations) {
            v.validate(issue)?;
        }
        if !(0.0..=1.0).contains(&ru) {
            return Err(Error::InvalidProfile(format!("reservation utility {ru} outside [0, 1]")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidProfile(format!("concession speed {beta} must be > 0")));
        }
        strategy.validate()?;
        Ok(AgentProfile {
            weights,
            valuations,
            ru,
            beta,
            strategy,
            pr: domain.pr().to_vec(),
            un: domain.un().to_vec(),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.valuations
    }

    pub fn ru(&self) -> f64 {
        self.ru
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn strategy(&self) -> &StrategyParams {
        &self.strategy
    }

    pub fn set_ru(&mut self, ru: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&ru) {
            return Err(Error::InvalidProfile(format!("reservation utility {ru} outside [0, 1]")));
        }
        self.ru = ru;
        Ok(())
    }

    pub fn set_beta(&mut self, beta: f64) -> Result<()> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidProfile(format!("concession speed {beta} must be > 0")));
        }
        self.beta = beta;
        Ok(())
    }

    pub fn set_strategy(&mut self, strategy: StrategyParams) -> Result<()> {
        strategy.validate()?;
        self.strategy = strategy;
        Ok(())
    }

    pub fn num_issues(&self) -> usize {
        self.weights.len()
    }

    pub fn pr(&self) -> &[usize] {
        &self.pr
    }

    pub fn un(&self) -> &[usize] {
        &self.un
    }

    pub fn is_predictable(&self, j: usize) -> bool {
        self.pr.binary_search(&j).is_ok()
    }

    /// `V_j(value)`.
    #[inline]
    pub fn score(&self, j: usize, value: Value) -> f64 {
        self.valuations[j].score(value)
    }

    /// `w_j * V_j(value)`.
    #[inline]
    pub fn term(&self, j: usize, value: Value) -> f64 {
        self.weights[j] * self.valuations[j].score(value)
    }

    fn check_values(&self, values: &[Value]) -> Result<()> {
        if values.len() != self.num_issues() {
            return Err(Error::DomainMismatch(format!(
                "offer assigns {} issues, profile has {}",
                values.len(),
                self.num_issues()
            )));
        }
        for (j, (&v, val)) in values.iter().zip(&self.valuations).enumerate() {
            let ok = match (val, v) {
                (Valuation::Linear { lo, hi, .. }, Value::Real(x)) => x >= *lo && x <= *hi,
                (Valuation::Table { scores }, Value::Label(i)) => i < scores.len(),
                _ => false,
            };
            if !ok {
                return Err(Error::DomainMismatch(format!("value {v:?} invalid for issue {j}")));
            }
        }
        Ok(())
    }

    /// Additive utility of a full offer.
    pub fn utility(&self, offer: &Offer) -> Result<f64> {
        self.check_values(&offer.values)?;
        Ok(self.utility_unchecked(&offer.values))
    }

    /// All utilities in the crate sum the weighted scores in issue order, with
    /// missing issues contributing nothing. Floating-point addition is
    /// monotone in each addend, so improving any single issue value can never
    /// lower the computed sum.
    #[inline]
    pub fn utility_unchecked(&self, values: &[Value]) -> f64 {
        let mut u = 0.0;
        for (j, &v) in values.iter().enumerate() {
            u += self.term(j, v);
        }
        u
    }

    /// Utility of a partially built offer; unset issues contribute 0.
    pub fn assignment_utility(&self, values: &[Option<Value>]) -> f64 {
        let mut u = 0.0;
        for (j, v) in values.iter().enumerate() {
            if let Some(v) = v {
                u += self.term(j, *v);
            }
        }
        u
    }

    /// Utility of an unpredictable partial offer: the UN terms only.
    pub fn partial_utility(&self, partial: &PartialOffer) -> Result<f64> {
        self.check_partial(partial)?;
        let mut u = 0.0;
        for (&j, &v) in self.un.iter().zip(&partial.values) {
            u += self.term(j, v);
        }
        Ok(u)
    }

    fn check_partial(&self, partial: &PartialOffer) -> Result<()> {
        if partial.values.len() != self.un.len() {
            return Err(Error::DomainMismatch(format!(
                "partial offer assigns {} issues, profile has {} unpredictable issues",
                partial.values.len(),
                self.un.len()
            )));
        }
        for (&j, &v) in self.un.iter().zip(&partial.values) {
            let ok = match (&self.valuations[j], v) {
                (Valuation::Linear { lo, hi, .. }, Value::Real(x)) => x >= *lo && x <= *hi,
                (Valuation::Table { scores }, Value::Label(i)) => i < scores.len(),
                _ => false,
            };
            if !ok {
                return Err(Error::DomainMismatch(format!("value {v:?} invalid for issue {j}")));
            }
        }
        Ok(())
    }

    /// Maximum utility obtainable from the predictable issues: the sum of
    /// their weights.
    pub fn max_pr(&self) -> f64 {
        self.pr.iter().map(|&j| self.weights[j]).sum()
    }

    /// `U(X') + maxPR`, summed in issue order with every PR term at its full
    /// weight.
    pub fn best_completion_utility(&self, partial: &PartialOffer) -> f64 {
        let mut u = 0.0;
        let mut k = 0;
        for j in 0..self.num_issues() {
            if self.is_predictable(j) {
                u += self.weights[j];
            } else {
                u += self.term(j, partial.values[k]);
                k += 1;
            }
        }
        u
    }

    /// Partial offer that can never be completed into an offer reaching `ru`.
    pub fn is_forbidden(&self, partial: &PartialOffer) -> bool {
        self.best_completion_utility(partial) < self.ru
    }

    /// Partial utility of the UN assignment given as label codes (UN order).
    pub(crate) fn partial_utility_codes(&self, codes: &[u16]) -> f64 {
        let mut u = 0.0;
        for (&j, &c) in self.un.iter().zip(codes) {
            u += self.term(j, Value::Label(c as usize));
        }
        u
    }

    /// Same as [`best_completion_utility`](Self::best_completion_utility) for
    /// label codes.
    pub(crate) fn best_completion_codes(&self, codes: &[u16]) -> f64 {
        let mut u = 0.0;
        let mut k = 0;
        for j in 0..self.num_issues() {
            if self.is_predictable(j) {
                u += self.weights[j];
            } else {
                u += self.term(j, Value::Label(codes[k] as usize));
                k += 1;
            }
        }
        u
    }

    /// Forbidden flags over an enumerated UN space.
    pub fn forbidden_mask(&self, space: &UnSpace) -> Vec<bool> {
        (0..space.len())
            .map(|i| self.best_completion_codes(space.codes(i)) < self.ru)
            .collect()
    }

    pub fn best_value(&self, j: usize) -> Value {
        self.valuations[j].best_value()
    }

    pub fn worst_value(&self, j: usize) -> Value {
        self.valuations[j].worst_value()
    }

    /// Offer assigning every issue its best value.
    pub fn optimum(&self) -> Offer {
        Offer::new((0..self.num_issues()).map(|j| self.best_value(j)).collect())
    }

    pub fn unpredictable_importance(&self) -> f64 {
        self.un.iter().map(|&j| self.weights[j]).sum()
    }
}

/// All forbidden unpredictable partial offers of `profile`.
pub fn forbidden_set(
    profile: &AgentProfile,
    domain: &NegotiationDomain,
) -> Result<BTreeSet<PartialOffer>> {
    let space = domain.un_space()?;
    let mask = profile.forbidden_mask(&space);
    Ok(mask
        .iter()
        .enumerate()
        .filter(|(_, f)| **f)
        .map(|(i, _)| space.partial(i))
        .collect())
}

/// Whether every member reaches its reservation utility with `offer`.
pub fn is_unanimously_acceptable(offer: &Offer, team: &[AgentProfile]) -> Result<bool> {
    if team.is_empty() {
        return Err(Error::TeamTooSmall { min: 1, got: 0 });
    }
    for member in team {
        if member.utility(offer)? < member.ru() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every predictable issue is compatible among the members: whenever
/// one member strictly prefers a value, no other member strictly prefers the
/// alternative.
pub fn check_pr_compatibility(team: &[AgentProfile], domain: &NegotiationDomain) -> bool {
    for &j in domain.pr() {
        match &domain.issue(j).domain {
            ValueDomain::Real { .. } => {
                let mut seen: Option<Direction> = None;
                for m in team {
                    let v = &m.valuations()[j];
                    if matches!(v, Valuation::Table { .. }) {
                        return false;
                    }
                    if let Some(d) = v.direction() {
                        match seen {
                            Some(s) if s != d => return false,
                            _ => seen = Some(d),
                        }
                    }
                }
            }
            ValueDomain::Discrete { labels } => {
                let n = labels.len();
                for a in team {
                    for b in team {
                        for v1 in 0..n {
                            for v2 in 0..n {
                                let (x1, x2) = (Value::Label(v1), Value::Label(v2));
                                if a.score(j, x2) > a.score(j, x1) && b.score(j, x2) < b.score(j, x1)
                                {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

impl IssueKind {
    pub fn is_predictable(self) -> bool {
        self == IssueKind::Predictable
    }
}
