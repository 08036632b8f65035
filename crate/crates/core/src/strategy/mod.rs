//! Team member decision rules: time-based concession, the basic and
//! Bayesian-learning candidate strategies, risk variants, and the
//! similarity-voting baseline team.

mod basic;
mod bayes;
mod concession;
pub(crate) mod member;
pub(crate) mod pool;
mod sbv;

pub use basic::{
    best_for_team, borda_rank, candidate_pool, demand_pr_value, is_satisfied,
    propose_candidate_basic, vote_on_offer, worst_for_team,
};
pub use bayes::{BayesianAcceptanceModel, ModelRow, ModelTarget};
pub use concession::aspiration;
pub use member::{propose_candidate_bayesian, propose_candidate_risk, MemberStrategy};
pub use sbv::{offer_similarity, SbvTeam, SBV_SEARCH_BUDGET};
