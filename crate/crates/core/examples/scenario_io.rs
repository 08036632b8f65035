//! Scenarios and transcripts are plain files: scenarios as JSON, transcripts
//! as one JSON object per line. Saves a generated scenario, reloads it,
//! replays a negotiation on the reloaded copy and checks both transcripts
//! match.
//!
//! ```text
//! cargo run --release --example scenario_io -- [dir]
//! ```

use std::path::PathBuf;

use teamneg::domain::{Scenario, SimilarityClass};
use teamneg::harness::{generate_scenarios, ExperimentSpec, Template};
use teamneg::opponent::{Opponent, OpponentKind};
use teamneg::protocol::{run_negotiation, MediatedTeam, NegotiationTranscript, TranscriptLevel};
use teamneg::strategy::MemberStrategy;

fn negotiate(s: &Scenario) -> teamneg::Result<NegotiationTranscript> {
    let mut team = MediatedTeam::uniform(&s.domain, s.team.clone(), MemberStrategy::Bayesian)?;
    let mut opp = Opponent::new(&s.domain, s.opponent.clone(), OpponentKind::BOULWARE)?;
    run_negotiation(&mut team, &mut opp, 200, 42, &s.id, TranscriptLevel::Full)
}

fn main() -> teamneg::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string()));
    let mut spec = ExperimentSpec::template(Template::SingleOpponent);
    spec.classes = vec![SimilarityClass::Average];
    spec.scenarios_per_class = 1;
    let scenario = generate_scenarios(&spec)?.remove(0).scenario;

    let path = dir.join(format!("{}.json", scenario.id));
    scenario.save(&path)?;
    let reloaded = Scenario::load(&path)?;
    println!("scenario written to {} ({} bytes)", path.display(), std::fs::metadata(&path)?.len());

    let original = negotiate(&scenario)?;
    let replayed = negotiate(&reloaded)?;
    let jsonl = dir.join(format!("{}.jsonl", scenario.id));
    original.write_jsonl(std::fs::File::create(&jsonl)?)?;
    let parsed = NegotiationTranscript::read_jsonl(std::io::BufReader::new(std::fs::File::open(&jsonl)?))?;
    println!("transcript written to {} ({} events)", jsonl.display(), original.events().len());
    println!("reloaded scenario reproduces the run: {}", original.events() == replayed.events());
    println!("transcript file parses back identically: {}", parsed.events() == original.events());
    println!("outcome: {:?}", original.outcome());
    Ok(())
}
