//! Random small instances and independent reference computations shared by
//! the integration and acceptance tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamneg::domain::{
    AgentProfile, Direction, Issue, IssueKind, NegotiationDomain, Offer, StrategyParams, Valuation,
    Value, ValueDomain,
};

/// A small domain: one or two real predictable issues, an optional discrete
/// predictable issue, and two or three discrete unpredictable issues.
pub fn small_domain(rng: &mut ChaCha8Rng) -> NegotiationDomain {
    let mut issues = Vec::new();
    let n_real = rng.gen_range(1..=2);
    for k in 0..n_real {
        let lo = rng.gen_range(0.0..50.0f64).round();
        let hi = lo + rng.gen_range(1.0..100.0f64).round();
        issues.push(Issue::real(issues.len(), &format!("p{k}"), IssueKind::Predictable, lo, hi));
    }
    if rng.gen_bool(0.5) {
        issues.push(Issue::discrete(issues.len(), "grade", IssueKind::Predictable, &["low", "mid", "top"]));
    }
    let n_un = rng.gen_range(2..=3);
    for k in 0..n_un {
        let n = rng.gen_range(2..=4);
        let labels: Vec<String> = (0..n).map(|i| format!("u{k}v{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        issues.push(Issue::discrete(issues.len(), &format!("u{k}"), IssueKind::Unpredictable, &refs));
    }
    NegotiationDomain::new(issues).expect("valid domain")
}

/// A random profile. Predictable issues follow `direction` and score the
/// preferred value exactly 1.
pub fn small_profile(
    rng: &mut ChaCha8Rng,
    domain: &NegotiationDomain,
    direction: Direction,
    ru: f64,
) -> AgentProfile {
    let mut weights: Vec<f64> = (0..domain.len()).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= sum);
    let valuations = domain
        .issues()
        .iter()
        .map(|issue| match (&issue.domain, issue.kind) {
            (ValueDomain::Real { lo, hi }, _) => Valuation::linear(*lo, *hi, direction),
            (ValueDomain::Discrete { labels }, IssueKind::Predictable) => {
                let n = labels.len();
                let mut t: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
                if direction == Direction::Decreasing {
                    t.reverse();
                }
                Valuation::table(t)
            }
            (ValueDomain::Discrete { labels }, IssueKind::Unpredictable) => {
                Valuation::table((0..labels.len()).map(|_| rng.gen_range(0.0..=1.0)).collect())
            }
        })
        .collect();
    let beta = rng.gen_range(0.2..2.0);
    AgentProfile::new(domain, weights, valuations, ru, beta, StrategyParams::default()).expect("valid profile")
}

/// A random team and a single opponent with opposite predictable
/// preferences.
pub struct SmallCase {
    pub domain: NegotiationDomain,
    pub team: Vec<AgentProfile>,
    pub opponent: AgentProfile,
}

pub fn small_case(seed: u64) -> SmallCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = small_domain(&mut rng);
    let n = rng.gen_range(2..=4);
    let team = (0..n)
        .map(|_| {
            let ru = rng.gen_range(0.2..0.6);
            small_profile(&mut rng, &domain, Direction::Decreasing, ru)
        })
        .collect();
    let opponent = small_profile(&mut rng, &domain, Direction::Increasing, 0.0);
    SmallCase { domain, team, opponent }
}

/// Score of `v` computed from the valuation's definition.
pub fn ref_score(val: &Valuation, v: Value) -> f64 {
    match (val, v) {
        (Valuation::Linear { lo, at_lo, hi, at_hi }, Value::Real(x)) => at_lo + (x - lo) / (hi - lo) * (at_hi - at_lo),
        (Valuation::Table { scores }, Value::Label(i)) => scores[i],
        _ => panic!("value does not fit the valuation"),
    }
}

/// Additive utility over the assigned issues.
pub fn ref_utility(p: &AgentProfile, values: &[Option<Value>]) -> f64 {
    values
        .iter()
        .enumerate()
        .filter_map(|(j, v)| v.map(|v| p.weights()[j] * ref_score(&p.valuations()[j], v)))
        .sum()
}

pub fn ref_offer_utility(p: &AgentProfile, offer: &Offer) -> f64 {
    ref_utility(p, &offer.values.iter().copied().map(Some).collect::<Vec<_>>())
}

/// Every full offer of the domain with real issues on a `grid`-point grid.
pub fn all_offers(domain: &NegotiationDomain, grid: usize) -> Vec<Offer> {
    let mut offers = vec![Vec::new()];
    for issue in domain.issues() {
        let values = issue.domain.grid(grid);
        offers = offers
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut o = prefix.clone();
                    o.push(v);
                    o
                })
            })
            .collect();
    }
    offers.into_iter().map(Offer::new).collect()
}

/// Every assignment of the unpredictable issues, as full-length value
/// vectors with the predictable issues unset.
pub fn all_partials(domain: &NegotiationDomain) -> Vec<Vec<Option<Value>>> {
    let mut out = vec![vec![None; domain.len()]];
    for &j in domain.un() {
        let n = domain.issue(j).domain.cardinality().expect("discrete");
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |v| {
                    let mut q = p.clone();
                    q[j] = Some(Value::Label(v));
                    q
                })
            })
            .collect();
    }
    out
}

/// Sum of the predictable weights.
pub fn ref_max_pr(p: &AgentProfile, domain: &NegotiationDomain) -> f64 {
    domain.pr().iter().map(|&j| p.weights()[j]).sum()
}

/// `1 - (1 - ru) t^(1/beta)`.
pub fn ref_aspiration(ru: f64, beta: f64, t: f64) -> f64 {
    1.0 - (1.0 - ru) * t.powf(1.0 / beta)
}

/// Nondominated points by pairwise comparison, sorted and deduplicated.
pub fn ref_frontier(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| {
            !points
                .iter()
                .any(|q| q.0 >= p.0 && q.1 >= p.1 && (q.0 > p.0 || q.1 > p.1))
        })
        .copied()
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out.dedup();
    out
}
