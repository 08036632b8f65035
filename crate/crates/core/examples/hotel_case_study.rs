//! The hotel booking case: four travellers with partially conflicting tastes
//! negotiate with a hotel. Prints the domain, the team's pre-negotiated
//! forbidden set and one negotiation against a Boulware hotel.
//!
//! ```text
//! cargo run --release --example hotel_case_study -- [seed]
//! ```

use teamneg::domain::{build_case_study_domain, generate_profiles, GenerationConfig, SimilarityClass};
use teamneg::opponent::{Opponent, OpponentKind};
use teamneg::protocol::{run_negotiation, MediatedTeam, Outcome, TranscriptLevel};
use teamneg::strategy::MemberStrategy;

fn main() -> teamneg::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let domain = build_case_study_domain();
    for issue in domain.issues() {
        println!("{:<18} {:?} {:?}", issue.name, issue.kind, issue.domain);
    }

    let case = generate_profiles(&domain, &GenerationConfig::default(), SimilarityClass::Average, seed)?;
    println!("\nteam dissimilarity {:.4}", case.dissimilarity);
    for (a, m) in case.members.iter().enumerate() {
        let best: Vec<String> = domain.un().iter().map(|&j| domain.describe(j, m.best_value(j))).collect();
        println!("member {a}: ru {:.2}, favourite extras {}", m.ru(), best.join(" / "));
    }

    let mut team = MediatedTeam::uniform(&domain, case.members.clone(), MemberStrategy::Basic)?;
    let mut hotel = Opponent::new(&domain, case.opponent.clone(), OpponentKind::BOULWARE)?;
    let log = run_negotiation(&mut team, &mut hotel, 1000, seed, "hotel", TranscriptLevel::Offers)?;
    let forbidden = teamneg::protocol::TeamForbiddenSet::prenegotiate(&case.members, &domain)?;
    println!(
        "forbidden partial offers: {} of {} ({:.1}%)",
        forbidden.len(),
        forbidden.space().len(),
        100.0 * forbidden.pruning_ratio()
    );

    match log.outcome() {
        Some(Outcome::Agreement { offer, round, proposer }) => {
            println!("\nagreement in round {round}, proposed by the {}", proposer.as_str());
            for (j, &v) in offer.values.iter().enumerate() {
                println!("  {:<18} {}", domain.issue(j).name, domain.describe(j, v));
            }
            for (a, m) in case.members.iter().enumerate() {
                println!("  member {a} utility {:.3} (ru {:.2})", m.utility(offer)?, m.ru());
            }
            println!("  hotel utility {:.3}", case.opponent.utility(offer)?);
        }
        other => println!("\nno agreement: {other:?}"),
    }
    Ok(())
}
