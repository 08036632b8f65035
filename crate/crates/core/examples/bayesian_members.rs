//! Bayesian members learn which unpredictable partial offers the team and
//! the opponent accept. Compares teams with 0 to 4 Bayesian members against
//! a Competitor and prints what the shared acceptance models learned.
//!
//! ```text
//! cargo run --release --example bayesian_members -- [repetitions]
//! ```

use teamneg::analysis::{aggregate, paired_sign_test};
use teamneg::domain::{build_case_study_domain, generate_profiles, GenerationConfig, SimilarityClass};
use teamneg::harness::{run_experiment, ExperimentSpec, RunOptions, Template};
use teamneg::opponent::{Opponent, OpponentKind};
use teamneg::protocol::{run_negotiation, MediatedTeam, TranscriptLevel};
use teamneg::strategy::MemberStrategy;

fn main() -> teamneg::Result<()> {
    let reps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let mut spec = ExperimentSpec::template(Template::SingleOpponent);
    spec.classes = vec![SimilarityClass::Dissimilar];
    spec.opponents = vec!["competitor".into()];
    spec.teams = (0..=4).map(|k| format!("bayesian:{k}")).collect();
    spec.repetitions = reps;
    spec.frontier = false;
    spec.compare.clear();
    let report = run_experiment(&spec, &RunOptions::default())?;
    for row in aggregate(&report.results) {
        println!(
            "{:<12} joint {:.4}  opponent {:.4}  agreements {:.0}%",
            row.team_config,
            row.mean_joint,
            row.mean_opp,
            100.0 * row.agreement_rate
        );
    }
    let t = paired_sign_test(&report.results, "bayesian:4", "bayesian:0");
    println!("all Bayesian over all basic: {} wins, {} losses, p = {:.3}", t.wins, t.losses, t.p_value);

    let domain = build_case_study_domain();
    let case = generate_profiles(&domain, &GenerationConfig::default(), SimilarityClass::Dissimilar, 3)?;
    let mut team = MediatedTeam::uniform(&domain, case.members, MemberStrategy::Bayesian)?;
    let mut opponent = Opponent::new(&domain, case.opponent, OpponentKind::Competitor)?;
    run_negotiation(&mut team, &mut opponent, 1000, 9, "learn", TranscriptLevel::Offers)?;
    if let Some(model) = team.opponent_model() {
        println!("\nopponent model after one negotiation (acceptable-hypothesis conditionals):");
        for row in model.dump().iter().filter(|r| r.acceptable && r.issue == 0) {
            let j = domain.un()[row.issue];
            println!(
                "  {:<18} {:<18} {:>3} of {:>3} samples, p = {:.3}",
                domain.issue(j).name,
                domain.describe(j, teamneg::domain::Value::Label(row.value)),
                row.count,
                row.samples,
                row.conditional
            );
        }
    }
    Ok(())
}
