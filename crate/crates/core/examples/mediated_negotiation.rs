//! Shows the mediator at work: candidate partial offers, the Borda vote,
//! per-issue demands and the unanimity vote, for the first rounds of a
//! negotiation against a Conceder.
//!
//! ```text
//! cargo run --release --example mediated_negotiation -- [rounds-to-show]
//! ```

use teamneg::domain::{build_case_study_domain, generate_profiles, GenerationConfig, SimilarityClass};
use teamneg::opponent::{Opponent, OpponentKind};
use teamneg::protocol::{run_negotiation, EventKind, MediatedTeam, TranscriptLevel};
use teamneg::strategy::MemberStrategy;

fn main() -> teamneg::Result<()> {
    let shown: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let domain = build_case_study_domain();
    let case = generate_profiles(&domain, &GenerationConfig::default(), SimilarityClass::Dissimilar, 11)?;
    let mut team = MediatedTeam::uniform(&domain, case.members, MemberStrategy::Basic)?;
    let mut opponent = Opponent::new(&domain, case.opponent, OpponentKind::CONCEDER)?;
    let log = run_negotiation(&mut team, &mut opponent, 1000, 5, "mediated", TranscriptLevel::Full)?;

    for e in log.events().iter().filter(|e| e.round < shown) {
        let what = match &e.kind {
            EventKind::Candidate { partial, fallback } => format!(
                "candidate {}{}",
                describe(&domain, &partial.values),
                if *fallback { " (fallback)" } else { "" }
            ),
            EventKind::Ballot { candidates } => format!("ballot of {} candidates", candidates.len()),
            EventKind::BordaScores { scores } => format!("borda scores {scores:?}"),
            EventKind::BordaWinner { index, tie } => {
                format!("winner #{index}{}", if *tie { " by lot" } else { "" })
            }
            EventKind::Demand { issue, value } => {
                format!("demands {} = {}", domain.issue(*issue).name, domain.describe(*issue, *value))
            }
            EventKind::Assign { issue, value, for_opponent } => format!(
                "assigns {} = {}{}",
                domain.issue(*issue).name,
                domain.describe(*issue, *value),
                if *for_opponent { " (for the opponent)" } else { "" }
            ),
            EventKind::Satisfied { satisfied } => format!("satisfied: {satisfied}"),
            EventKind::Vote { accept, utility, aspiration } => {
                format!("votes {} (utility {utility:.3}, aspiration {aspiration:.3})", yes(*accept))
            }
            EventKind::Verdict { accept, auto } => {
                format!("verdict {}{}", yes(*accept), if *auto { " (forbidden)" } else { "" })
            }
            EventKind::Offer { offer } => format!("offers {}", describe(&domain, &offer.values)),
            other => format!("{other:?}"),
        };
        println!("[{:>3}] {:<22} {what}", e.round, e.actor.to_string());
    }
    println!("...\noutcome: {:?}", log.outcome());
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "accept"
    } else {
        "reject"
    }
}

fn describe(domain: &teamneg::domain::NegotiationDomain, values: &[teamneg::domain::Value]) -> String {
    let idx: Vec<usize> = if values.len() == domain.len() {
        (0..domain.len()).collect()
    } else {
        domain.un().to_vec()
    };
    let parts: Vec<String> = idx.iter().zip(values).map(|(&j, &v)| domain.describe(j, v)).collect();
    format!("[{}]", parts.join(", "))
}
