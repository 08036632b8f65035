//! The similarity-based voting baseline: members propose full offers, the
//! team votes by similarity, and nothing protects a member's reservation
//! utility. Searches a few dissimilar teams for an agreement the baseline
//! accepts below some member's reservation utility, and shows the mediated
//! team on the same case.
//!
//! ```text
//! cargo run --release --example sbv_baseline -- [cases]
//! ```

use teamneg::domain::{build_case_study_domain, generate_profiles, GenerationConfig, SimilarityClass};
use teamneg::opponent::{Opponent, OpponentKind};
use teamneg::protocol::{run_negotiation, MediatedTeam, Negotiator, TranscriptLevel};
use teamneg::strategy::{MemberStrategy, SbvTeam};

fn main() -> teamneg::Result<()> {
    let cases: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let domain = build_case_study_domain();
    for seed in 0..cases {
        let case = generate_profiles(&domain, &GenerationConfig::default(), SimilarityClass::Dissimilar, seed)?;
        let teams: Vec<(&str, Box<dyn Negotiator>)> = vec![
            ("sbv", Box::new(SbvTeam::new(&domain, case.members.clone())?)),
            ("mediated", Box::new(MediatedTeam::uniform(&domain, case.members.clone(), MemberStrategy::Basic)?)),
        ];
        let mut line = format!("case {seed:>2}:");
        for (name, mut team) in teams {
            let mut opp = Opponent::new(&domain, case.opponent.clone(), OpponentKind::CONCEDER)?;
            let log = run_negotiation(team.as_mut(), &mut opp, 1000, seed, name, TranscriptLevel::Offers)?;
            match log.outcome().and_then(|o| o.agreement()) {
                Some(offer) => {
                    let utils: Vec<f64> = case.members.iter().map(|m| m.utility(offer)).collect::<Result<_, _>>()?;
                    let worst = utils.iter().copied().fold(1.0, f64::min);
                    let joint: f64 = utils.iter().product();
                    let flag = if worst < case.members[0].ru() { " BELOW ru" } else { "" };
                    line += &format!("  {name}: joint {joint:.4}, worst member {worst:.3}{flag}");
                }
                None => line += &format!("  {name}: no agreement"),
            }
        }
        println!("{line}");
    }
    Ok(())
}
