//! Computes the Pareto frontier between a team's joint utility (product of
//! member utilities) and the opponent's utility, then measures how far a
//! negotiated agreement lies from it.
//!
//! ```text
//! cargo run --release --example pareto_frontier -- [grid]
//! ```

use teamneg::analysis::{pareto_distance, ParetoFrontier, DEFAULT_FRONTIER_BUDGET};
use teamneg::domain::{build_case_study_domain, generate_profiles, GenerationConfig, SimilarityClass};
use teamneg::opponent::{Opponent, OpponentKind};
use teamneg::protocol::{run_negotiation, MediatedTeam, TranscriptLevel};
use teamneg::strategy::MemberStrategy;

fn main() -> teamneg::Result<()> {
    let grid: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(11);
    let domain = build_case_study_domain();
    let case = generate_profiles(&domain, &GenerationConfig::default(), SimilarityClass::Similar, 4)?;
    let frontier = ParetoFrontier::compute(
        &domain,
        &case.members,
        std::slice::from_ref(&case.opponent),
        grid,
        DEFAULT_FRONTIER_BUDGET,
    )?;
    println!("{} nondominated offers on a {grid}-point grid", frontier.len());
    let step = (frontier.len() / 8).max(1);
    for (p, o) in frontier.points().iter().zip(frontier.offers()).step_by(step) {
        let desc: Vec<String> = o.values.iter().enumerate().map(|(j, &v)| domain.describe(j, v)).collect();
        println!("  team {:.4}  opponent {:.4}  {}", p.0, p.1, desc.join(" | "));
    }

    let mut team = MediatedTeam::uniform(&domain, case.members.clone(), MemberStrategy::Bayesian)?;
    let mut opp = Opponent::new(&domain, case.opponent.clone(), OpponentKind::Matcher)?;
    let log = run_negotiation(&mut team, &mut opp, 1000, 1, "frontier", TranscriptLevel::Offers)?;
    if let Some(offer) = log.outcome().and_then(|o| o.agreement()) {
        let joint: f64 = case.members.iter().map(|m| m.utility(offer)).product::<teamneg::Result<f64>>()?;
        let point = (joint, case.opponent.utility(offer)?);
        println!(
            "agreement at ({:.4}, {:.4}), distance to the frontier {:.4}",
            point.0,
            point.1,
            pareto_distance(point, &frontier)
        );
    }
    Ok(())
}
