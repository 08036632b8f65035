//! Decision rules of the basic team member: vote, candidate generation,
//! Borda ranking and predictable-issue demands.

use rand::Rng;

use super::aspiration;
use crate::domain::{AgentProfile, NegotiationDomain, Offer, PartialOffer, Valuation, Value};
use crate::error::Result;
use crate::protocol::TeamForbiddenSet;

/// Accepts iff the offer meets the member's current aspiration.
pub fn vote_on_offer(member: &AgentProfile, offer: &Offer, t: f64) -> Result<bool> {
    Ok(member.utility(offer)? >= aspiration(member.ru(), member.beta(), t))
}

/// Partial offers outside the team's forbidden set that can still reach the
/// member's aspiration when the predictable issues are at their best, in
/// canonical order.
pub fn candidate_pool(member: &AgentProfile, forbidden: &TeamForbiddenSet, t: f64) -> Vec<PartialOffer> {
    let s = aspiration(member.ru(), member.beta(), t);
    let space = forbidden.space();
    (0..space.len())
        .filter(|&i| !forbidden.contains_index(i) && member.best_completion_codes(space.codes(i)) >= s)
        .map(|i| space.partial(i))
        .collect()
}

/// Uniform draw from the pool; `None` when it is empty.
pub fn propose_candidate_basic<R: Rng>(pool: &[PartialOffer], rng: &mut R) -> Option<PartialOffer> {
    if pool.is_empty() {
        None
    } else {
        Some(pool[rng.gen_range(0..pool.len())].clone())
    }
}

/// Borda scores `|C| - 1 ..= 0` by descending partial utility, ties by
/// canonical order. `candidates` must be deduplicated.
pub fn borda_rank(member: &AgentProfile, candidates: &[PartialOffer]) -> Result<Vec<u32>> {
    let utils = candidates
        .iter()
        .map(|c| member.partial_utility(c))
        .collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| utils[b].total_cmp(&utils[a]).then_with(|| candidates[a].cmp(&candidates[b])));
    let mut scores = vec![0u32; candidates.len()];
    let top = candidates.len().saturating_sub(1) as u32;
    for (rank, &i) in order.iter().enumerate() {
        scores[i] = top - rank as u32;
    }
    Ok(scores)
}

/// Whether the partially built offer (unset issues count 0) meets `s`.
pub fn is_satisfied(member: &AgentProfile, current: &[Option<Value>], s: f64) -> bool {
    member.assignment_utility(current) >= s
}

/// Value the member asks for on predictable issue `j`: the least favourable
/// one that still lifts the partially built offer to `s`, or the most
/// favourable one when no value suffices.
///
/// Feasibility is checked on the actual utility sum, so the returned demand
/// is guaranteed to satisfy [`is_satisfied`] whenever it is not the best
/// value.
pub fn demand_pr_value(
    member: &AgentProfile,
    j: usize,
    current: &[Option<Value>],
    s: f64,
) -> Value {
    let mut work = current.to_vec();
    let mut reaches = |v: Value| {
        work[j] = Some(v);
        member.assignment_utility(&work) >= s
    };
    let best = member.best_value(j);
    match &member.valuations()[j] {
        Valuation::Table { scores } => {
            let mut chosen: Option<usize> = None;
            for (i, &score) in scores.iter().enumerate() {
                if reaches(Value::Label(i)) && chosen.is_none_or(|c| score < scores[c]) {
                    chosen = Some(i);
                }
            }
            chosen.map(Value::Label).unwrap_or(best)
        }
        Valuation::Linear {
            lo,
            at_lo,
            hi,
            at_hi,
        } => {
            if !reaches(best) {
                return best;
            }
            let worst = member.worst_value(j);
            if reaches(worst) {
                return worst;
            }
            let mut base = current.to_vec();
            base[j] = None;
            let deficit = s - member.assignment_utility(&base);
            let target = deficit / member.weights()[j];
            let f = ((target - at_lo) / (at_hi - at_lo)).clamp(0.0, 1.0);
            let x = (lo + f * (hi - lo)).clamp(*lo, *hi);
            if reaches(Value::Real(x)) {
                return Value::Real(x);
            }
            // Rounding left the closed form short; bisect toward `best`.
            let (mut fail, mut pass) = (x, best.as_real().unwrap_or(x));
            for _ in 0..128 {
                let mid = fail + (pass - fail) / 2.0;
                if mid == fail || mid == pass {
                    break;
                }
                if reaches(Value::Real(mid)) {
                    pass = mid;
                } else {
                    fail = mid;
                }
            }
            Value::Real(pass)
        }
    }
}

/// The demand every member weakly prefers to all others. Exists when the
/// issue is compatible among `members`.
pub fn best_for_team(members: &[&AgentProfile], j: usize, demands: &[Value]) -> Value {
    let mut best = demands[0];
    for &d in &demands[1..] {
        if members.iter().any(|m| m.score(j, d) > m.score(j, best)) {
            best = d;
        }
    }
    best
}

/// The value every member weakly disprefers to all others, which by
/// construction of the scenario is the opponent's favourite.
pub fn worst_for_team(members: &[&AgentProfile], domain: &NegotiationDomain, j: usize) -> Value {
    let values = domain.issue(j).domain.grid(2);
    let mut worst = values[0];
    for &v in &values[1..] {
        if members.iter().any(|m| m.score(j, v) < m.score(j, worst)) {
            worst = v;
        }
    }
    worst
}
