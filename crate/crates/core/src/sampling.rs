//! Uniform random offers for the search-based strategies.
//!
//! A sample is a uniform index into the enumerated unpredictable space plus
//! one uniform value per predictable issue, which is the same distribution
//! as drawing every issue independently. Per-profile tables of partial
//! utilities let a search reject hopeless samples before drawing their
//! predictable values.

use rand::Rng;

use crate::domain::{AgentProfile, NegotiationDomain, Offer, UnSpace, Value, ValueDomain};
use crate::error::Result;

#[derive(Clone, Copy, Debug)]
enum Axis {
    Real { lo: f64, hi: f64 },
    Labels(usize),
}

impl Axis {
    #[inline]
    fn draw<R: Rng>(self, rng: &mut R) -> Value {
        match self {
            Axis::Real { lo, hi } => Value::Real(rng.gen_range(lo..=hi)),
            Axis::Labels(n) => Value::Label(rng.gen_range(0..n)),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct OfferSampler {
    space: UnSpace,
    un: Vec<usize>,
    pr: Vec<(usize, Axis)>,
    n_issues: usize,
}

/// Partial utilities of one profile over the sampler's unpredictable space.
#[derive(Clone, Debug)]
pub(crate) struct UtilityTable {
    un: Vec<f64>,
    max_pr: f64,
}

impl UtilityTable {
    #[inline]
    pub fn partial(&self, idx: usize) -> f64 {
        self.un[idx]
    }
}

/// A drawn offer: unpredictable index and predictable values in PR order.
#[derive(Clone, Debug, Default)]
pub(crate) struct Sample {
    pub idx: usize,
    pub pr: Vec<Value>,
}

impl OfferSampler {
    /// Fails when an unpredictable issue is not discrete.
    pub fn new(domain: &NegotiationDomain) -> Result<Self> {
        let space = domain.un_space()?;
        let pr = domain
            .pr()
            .iter()
            .map(|&j| {
                let axis = match &domain.issue(j).domain {
                    ValueDomain::Real { lo, hi } => Axis::Real { lo: *lo, hi: *hi },
                    ValueDomain::Discrete { labels } => Axis::Labels(labels.len()),
                };
                (j, axis)
            })
            .collect();
        Ok(OfferSampler {
            space,
            un: domain.un().to_vec(),
            pr,
            n_issues: domain.len(),
        })
    }

    pub fn space(&self) -> &UnSpace {
        &self.space
    }

    pub fn table(&self, profile: &AgentProfile) -> UtilityTable {
        UtilityTable {
            un: (0..self.space.len())
                .map(|i| profile.partial_utility_codes(self.space.codes(i)))
                .collect(),
            max_pr: self.pr.iter().map(|&(j, _)| profile.weights()[j]).sum(),
        }
    }

    #[inline]
    pub fn draw_index<R: Rng>(&self, rng: &mut R) -> usize {
        rng.gen_range(0..self.space.len())
    }

    #[inline]
    pub fn draw_pr<R: Rng>(&self, rng: &mut R, out: &mut Vec<Value>) {
        out.clear();
        out.extend(self.pr.iter().map(|&(_, axis)| axis.draw(rng)));
    }

    /// Utility contribution of predictable values in PR order.
    #[inline]
    pub fn pr_utility(&self, profile: &AgentProfile, pr: &[Value]) -> f64 {
        self.pr.iter().zip(pr).map(|(&(j, _), &v)| profile.term(j, v)).sum()
    }

    /// Approximate utility of a sample; exact sums use the assembled offer.
    #[inline]
    pub fn utility(&self, profile: &AgentProfile, table: &UtilityTable, s: &Sample) -> f64 {
        table.partial(s.idx) + self.pr_utility(profile, &s.pr)
    }

    /// Draws one sample. Returns `false` without drawing predictable values
    /// when its utility for `table` cannot reach `floor`.
    #[inline]
    pub fn draw_above<R: Rng>(&self, rng: &mut R, table: &UtilityTable, floor: f64, s: &mut Sample) -> bool {
        s.idx = self.draw_index(rng);
        if table.partial(s.idx) + table.max_pr < floor {
            return false;
        }
        self.draw_pr(rng, &mut s.pr);
        true
    }

    pub fn assemble(&self, s: &Sample) -> Offer {
        let mut values = vec![Value::Label(0); self.n_issues];
        for (&j, &c) in self.un.iter().zip(self.space.codes(s.idx)) {
            values[j] = Value::Label(c as usize);
        }
        for (&(j, _), &v) in self.pr.iter().zip(&s.pr) {
            values[j] = v;
        }
        Offer::new(values)
    }
}

/// Bounded random search for an offer whose utility lies in
/// `[target, target + window]`: the first such sample, else the sampled
/// offer closest above the target, else the profile's optimum.
pub(crate) fn search_near_target<R: Rng>(
    sampler: &OfferSampler,
    profile: &AgentProfile,
    table: &UtilityTable,
    target: f64,
    window: f64,
    budget: usize,
    rng: &mut R,
) -> Offer {
    let mut s = Sample::default();
    let mut closest: Option<(f64, Sample)> = None;
    for _ in 0..budget {
        if !sampler.draw_above(rng, table, target, &mut s) {
            continue;
        }
        let u = sampler.utility(profile, table, &s);
        if u < target {
            continue;
        }
        if u <= target + window {
            return sampler.assemble(&s);
        }
        if closest.as_ref().is_none_or(|(cu, _)| u < *cu) {
            closest = Some((u, s.clone()));
        }
    }
    match closest {
        Some((_, s)) => sampler.assemble(&s),
        None => profile.optimum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_case_study_domain, generate_profiles, GenerationConfig, SimilarityClass};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sample_utility_matches_the_offer() {
        let d = build_case_study_domain();
        let g = generate_profiles(&d, &GenerationConfig::default(), SimilarityClass::Average, 3).unwrap();
        let sampler = OfferSampler::new(&d).unwrap();
        let table = sampler.table(&g.opponent);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut s = Sample::default();
        for _ in 0..200 {
            assert!(sampler.draw_above(&mut rng, &table, f64::NEG_INFINITY, &mut s));
            let exact = g.opponent.utility(&sampler.assemble(&s)).unwrap();
            assert!((sampler.utility(&g.opponent, &table, &s) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn search_respects_the_target() {
        let d = build_case_study_domain();
        let g = generate_profiles(&d, &GenerationConfig::default(), SimilarityClass::Similar, 4).unwrap();
        let sampler = OfferSampler::new(&d).unwrap();
        let table = sampler.table(&g.opponent);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for target in [0.2, 0.5, 0.8] {
            let o = search_near_target(&sampler, &g.opponent, &table, target, 0.05, 5000, &mut rng);
            assert!(g.opponent.utility(&o).unwrap() >= target - 1e-12);
        }
        let o = search_near_target(&sampler, &g.opponent, &table, 1.0, 0.05, 10, &mut rng);
        assert_eq!(o, g.opponent.optimum());
    }
}
