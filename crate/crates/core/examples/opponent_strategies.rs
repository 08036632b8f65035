//! The four opponent strategies: their target utility over time, and how
//! each fares against the same mediated team.
//!
//! ```text
//! cargo run --release --example opponent_strategies
//! ```

use teamneg::domain::{build_case_study_domain, generate_profiles, GenerationConfig, SimilarityClass};
use teamneg::opponent::{
    competitor_target, time_based_target, Opponent, OpponentKind, BOULWARE_BETA, CONCEDER_BETA,
};
use teamneg::protocol::{run_negotiation, MediatedTeam, TranscriptLevel};
use teamneg::strategy::MemberStrategy;

fn main() -> teamneg::Result<()> {
    println!("{:>5} {:>9} {:>9} {:>11}", "t", "conceder", "boulware", "competitor");
    let received = [0.2, 0.3, 0.35, 0.4];
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        println!(
            "{t:>5.1} {:>9.3} {:>9.3} {:>11.3}",
            time_based_target(0.0, CONCEDER_BETA, t),
            time_based_target(0.0, BOULWARE_BETA, t),
            competitor_target(0.0, &received, t)
        );
    }

    let domain = build_case_study_domain();
    let case = generate_profiles(&domain, &GenerationConfig::default(), SimilarityClass::Average, 2)?;
    println!();
    for kind in OpponentKind::ALL {
        let mut team = MediatedTeam::uniform(&domain, case.members.clone(), MemberStrategy::Basic)?;
        let mut opp = Opponent::new(&domain, case.opponent.clone(), kind)?;
        let log = run_negotiation(&mut team, &mut opp, 1000, 3, "opp", TranscriptLevel::Offers)?;
        match log.outcome().and_then(|o| o.agreement()) {
            Some(offer) => {
                let joint: f64 = case.members.iter().map(|m| m.utility(offer)).product::<teamneg::Result<f64>>()?;
                println!(
                    "{:<11} agreement in round {:>4}: team joint {:.4}, opponent {:.4}",
                    kind.name(),
                    log.outcome().unwrap().round(),
                    joint,
                    case.opponent.utility(offer)?
                );
            }
            None => println!("{:<11} no agreement", kind.name()),
        }
    }
    Ok(())
}
