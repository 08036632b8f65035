//! Random team generation by similarity class.
//!
//! A team is drawn around a latent conflict level `k ~ U(0, 1)`. Members are
//! blends of a shared base profile and a private fresh profile; `k` controls
//! the blend, how concentrated the unpredictable weights are, and how skewed
//! the valuation tables are. Teams are then accepted by rejection sampling
//! on their measured team dissimilarity.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    team_dissimilarity, AgentProfile, Direction, NegotiationDomain, StrategyParams, Valuation,
    ValueDomain, DEFAULT_PR_GRID,
};
use crate::error::{Error, Result};

const IMPORTANCE_LO: f64 = 0.79;
const IMPORTANCE_HI: f64 = 0.82;
const CONCENTRATION_MAX: f64 = 3.2;
const CONCENTRATION_EXP: f64 = 3.7;
const COHESION_EXP: f64 = 3.8;
const SKEW_LO: f64 = 1.1;
const SKEW_HI: f64 = 1.8;
const OPPONENT_IMPORTANCE: (f64, f64) = (0.6, 0.9);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityClass {
    Similar,
    Average,
    Dissimilar,
}

impl SimilarityClass {
    pub const ALL: [SimilarityClass; 3] = [
        SimilarityClass::Similar,
        SimilarityClass::Average,
        SimilarityClass::Dissimilar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityClass::Similar => "similar",
            SimilarityClass::Average => "average",
            SimilarityClass::Dissimilar => "dissimilar",
        }
    }
}

impl fmt::Display for SimilarityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimilarityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "similar" => Ok(SimilarityClass::Similar),
            "average" => Ok(SimilarityClass::Average),
            "dissimilar" => Ok(SimilarityClass::Dissimilar),
            other => Err(Error::Invalid(format!("unknown similarity class `{other}`"))),
        }
    }
}

/// Team-dissimilarity thresholds separating the three classes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityBands {
    /// Teams strictly below are similar.
    pub lower: f64,
    /// Teams strictly above are dissimilar.
    pub upper: f64,
}

impl SimilarityBands {
    /// 25th and 75th percentiles of the team dissimilarity of 1000 random
    /// four-member hotel teams (see [`calibrate_similarity_bands`]).
    pub const CASE_STUDY: SimilarityBands = SimilarityBands {
        lower: 0.001_06,
        upper: 0.080,
    };

    pub fn classify(&self, dissimilarity: f64) -> SimilarityClass {
        if dissimilarity < self.lower {
            SimilarityClass::Similar
        } else if dissimilarity > self.upper {
            SimilarityClass::Dissimilar
        } else {
            SimilarityClass::Average
        }
    }

    pub fn range(&self, class: SimilarityClass) -> (f64, f64) {
        match class {
            SimilarityClass::Similar => (0.0, self.lower),
            SimilarityClass::Average => (self.lower, self.upper),
            SimilarityClass::Dissimilar => (self.upper, 1.0),
        }
    }
}

impl Default for SimilarityBands {
    fn default() -> Self {
        SimilarityBands::CASE_STUDY
    }
}

/// Classification of the total weight a member puts on unpredictable issues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImportanceBand {
    Low,
    Average,
    High,
}

impl ImportanceBand {
    pub fn range(self) -> (f64, f64) {
        match self {
            ImportanceBand::Low => (0.0, 0.33),
            ImportanceBand::Average => (0.33, 0.66),
            ImportanceBand::High => (0.66, 1.0),
        }
    }

    pub fn classify(importance: f64) -> Self {
        if importance < 0.33 {
            ImportanceBand::Low
        } else if importance < 0.66 {
            ImportanceBand::Average
        } else {
            ImportanceBand::High
        }
    }
}

impl fmt::Display for ImportanceBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImportanceBand::Low => "low",
            ImportanceBand::Average => "average",
            ImportanceBand::High => "high",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationConfig {
    pub n_members: usize,
    pub ru: f64,
    /// Members' concession speeds are drawn uniformly from this range.
    pub beta_range: (f64, f64),
    /// Preferred direction of the team on real predictable issues; the
    /// opponent gets the opposite one.
    pub team_direction: Direction,
    pub opponent_ru: f64,
    pub pr_grid: usize,
    pub max_attempts: usize,
    pub bands: SimilarityBands,
    /// Forces every member's unpredictable importance into a band.
    pub importance: Option<ImportanceBand>,
    /// Forces the opponent's unpredictable importance into a band.
    pub opponent_importance: Option<ImportanceBand>,
    pub strategy: StrategyParams,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            n_members: 4,
            ru: 0.5,
            beta_range: (0.5, 1.0),
            team_direction: Direction::Decreasing,
            opponent_ru: 0.0,
            pr_grid: DEFAULT_PR_GRID,
            max_attempts: 10_000,
            bands: SimilarityBands::CASE_STUDY,
            importance: None,
            opponent_importance: None,
            strategy: StrategyParams::default(),
        }
    }
}

/// A generated negotiation case.
#[derive(Clone, Debug)]
pub struct GeneratedTeam {
    pub members: Vec<AgentProfile>,
    pub opponent: AgentProfile,
    /// Zero for single-member teams.
    pub dissimilarity: f64,
    pub attempts: usize,
}

/// Raw preferences before they become an [`AgentProfile`].
#[derive(Clone, Debug)]
struct Draft {
    weights: Vec<f64>,
    /// `None` for real issues, which are linear.
    tables: Vec<Option<Vec<f64>>>,
}

struct Latent {
    importance: f64,
    concentration: f64,
    cohesion: f64,
    skew: f64,
}

impl Latent {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        let k: f64 = rng.gen();
        Latent {
            importance: IMPORTANCE_LO + (IMPORTANCE_HI - IMPORTANCE_LO) * k,
            concentration: CONCENTRATION_MAX * k.powf(CONCENTRATION_EXP),
            cohesion: k.powf(COHESION_EXP),
            skew: SKEW_LO + (SKEW_HI - SKEW_LO) * k,
        }
    }
}

fn normalize(xs: &mut [f64]) {
    let s: f64 = xs.iter().sum();
    if s > 0.0 {
        xs.iter_mut().for_each(|x| *x /= s);
    } else if !xs.is_empty() {
        let n = xs.len() as f64;
        xs.iter_mut().for_each(|x| *x = 1.0 / n);
    }
}

/// Affine map onto `[0, 1]`; constant tables become all ones.
fn rescale(xs: &mut [f64]) {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        xs.iter_mut().for_each(|x| *x = ((*x - lo) / (hi - lo)).clamp(0.0, 1.0));
    } else {
        xs.iter_mut().for_each(|x| *x = 1.0);
    }
}

fn draw_draft(
    rng: &mut ChaCha8Rng,
    domain: &NegotiationDomain,
    importance: f64,
    concentration: f64,
    skew: f64,
    pr_direction: Direction,
) -> Draft {
    let n = domain.len();
    let importance = if domain.pr().is_empty() {
        1.0
    } else if domain.un().is_empty() {
        0.0
    } else {
        importance
    };
    let mut weights = vec![0.0; n];
    let mut pr: Vec<f64> = domain.pr().iter().map(|_| rng.gen::<f64>()).collect();
    normalize(&mut pr);
    let mut un: Vec<f64> = domain
        .un()
        .iter()
        .map(|_| rng.gen::<f64>().powf(concentration))
        .collect();
    normalize(&mut un);
    for (&j, w) in domain.pr().iter().zip(&pr) {
        weights[j] = (1.0 - importance) * w;
    }
    for (&j, w) in domain.un().iter().zip(&un) {
        weights[j] = importance * w;
    }
    normalize(&mut weights);

    let tables = domain
        .issues()
        .iter()
        .map(|issue| match &issue.domain {
            ValueDomain::Real { .. } => None,
            ValueDomain::Discrete { labels } => {
                let mut t: Vec<f64> = (0..labels.len())
                    .map(|_| rng.gen::<f64>().powf(skew))
                    .collect();
                if issue.kind.is_predictable() {
                    // Monotone in label order keeps the issue compatible.
                    t.sort_by(f64::total_cmp);
                    if pr_direction == Direction::Decreasing {
                        t.reverse();
                    }
                }
                rescale(&mut t);
                Some(t)
            }
        })
        .collect();
    Draft { weights, tables }
}

fn blend(base: &Draft, fresh: &Draft, c: f64) -> Draft {
    let mut weights: Vec<f64> = base
        .weights
        .iter()
        .zip(&fresh.weights)
        .map(|(a, b)| (1.0 - c) * a + c * b)
        .collect();
    normalize(&mut weights);
    let tables = base
        .tables
        .iter()
        .zip(&fresh.tables)
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => {
                let mut t: Vec<f64> = a.iter().zip(b).map(|(x, y)| (1.0 - c) * x + c * y).collect();
                rescale(&mut t);
                Some(t)
            }
            _ => None,
        })
        .collect();
    Draft { weights, tables }
}

fn into_profile(
    draft: Draft,
    domain: &NegotiationDomain,
    direction: Direction,
    ru: f64,
    beta: f64,
    strategy: StrategyParams,
) -> Result<AgentProfile> {
    let valuations = domain
        .issues()
        .iter()
        .zip(draft.tables)
        .map(|(issue, table)| match (&issue.domain, table) {
            (ValueDomain::Real { lo, hi }, _) => Valuation::linear(*lo, *hi, direction),
            (ValueDomain::Discrete { .. }, Some(t)) => Valuation::table(t),
            (ValueDomain::Discrete { .. }, None) => unreachable!("discrete issues get tables"),
        })
        .collect();
    AgentProfile::new(domain, draft.weights, valuations, ru, beta, strategy)
}

/// One unfiltered team of `config.n_members` members.
fn random_team(
    rng: &mut ChaCha8Rng,
    domain: &NegotiationDomain,
    config: &GenerationConfig,
) -> Result<Vec<AgentProfile>> {
    let latent = Latent::draw(rng);
    let dir = config.team_direction;
    let base = draw_draft(
        rng,
        domain,
        latent.importance,
        latent.concentration,
        latent.skew,
        dir,
    );
    let (blo, bhi) = config.beta_range;
    let mut members = Vec::with_capacity(config.n_members);
    for _ in 0..config.n_members {
        let importance = match config.importance {
            Some(band) => {
                let (lo, hi) = band.range();
                rng.gen_range(lo..=hi)
            }
            None => latent.importance,
        };
        let fresh = draw_draft(rng, domain, importance, latent.concentration, latent.skew, dir);
        let mut draft = blend(&base, &fresh, latent.cohesion);
        if config.importance.is_some() {
            // Blending would drag importance back toward the base draw.
            draft = enforce_importance(draft, domain, importance);
        }
        let beta = if bhi > blo { rng.gen_range(blo..=bhi) } else { blo };
        members.push(into_profile(draft, domain, dir, config.ru, beta, config.strategy)?);
    }
    Ok(members)
}

fn enforce_importance(mut draft: Draft, domain: &NegotiationDomain, importance: f64) -> Draft {
    if domain.pr().is_empty() || domain.un().is_empty() {
        return draft;
    }
    let un_sum: f64 = domain.un().iter().map(|&j| draft.weights[j]).sum();
    let pr_sum = 1.0 - un_sum;
    for &j in domain.un() {
        draft.weights[j] *= importance / un_sum;
    }
    for &j in domain.pr() {
        draft.weights[j] *= (1.0 - importance) / pr_sum;
    }
    normalize(&mut draft.weights);
    draft
}

fn random_opponent(
    rng: &mut ChaCha8Rng,
    domain: &NegotiationDomain,
    config: &GenerationConfig,
) -> Result<AgentProfile> {
    let (lo, hi) = config
        .opponent_importance
        .map_or(OPPONENT_IMPORTANCE, ImportanceBand::range);
    let importance = rng.gen_range(lo..=hi);
    let dir = config.team_direction.flip();
    let draft = draw_draft(rng, domain, importance, 1.0, 1.0, dir);
    into_profile(draft, domain, dir, config.opponent_ru, 1.0, StrategyParams::default())
}

/// Generates a team of the requested similarity class plus an opponent.
/// Deterministic in `seed`.
pub fn generate_profiles(
    domain: &NegotiationDomain,
    config: &GenerationConfig,
    class: SimilarityClass,
    seed: u64,
) -> Result<GeneratedTeam> {
    if config.n_members == 0 {
        return Err(Error::TeamTooSmall { min: 1, got: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=config.max_attempts.max(1) {
        let members = random_team(&mut rng, domain, config)?;
        let d = if members.len() < 2 {
            0.0
        } else {
            team_dissimilarity(&members, domain, config.pr_grid)?
        };
        if members.len() < 2 || config.bands.classify(d) == class {
            let opponent = random_opponent(&mut rng, domain, config)?;
            return Ok(GeneratedTeam {
                members,
                opponent,
                dissimilarity: d,
                attempts: attempt,
            });
        }
    }
    let (lo, hi) = config.bands.range(class);
    Err(Error::GenerationFailed {
        class: class.to_string(),
        attempts: config.max_attempts,
        lo,
        hi,
    })
}

/// Generates a team and an opponent without filtering on similarity.
/// Deterministic in `seed`.
pub fn generate_unfiltered(
    domain: &NegotiationDomain,
    config: &GenerationConfig,
    seed: u64,
) -> Result<GeneratedTeam> {
    if config.n_members == 0 {
        return Err(Error::TeamTooSmall { min: 1, got: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = random_team(&mut rng, domain, config)?;
    let dissimilarity = if members.len() < 2 {
        0.0
    } else {
        team_dissimilarity(&members, domain, config.pr_grid)?
    };
    let opponent = random_opponent(&mut rng, domain, config)?;
    Ok(GeneratedTeam {
        members,
        opponent,
        dissimilarity,
        attempts: 1,
    })
}

/// Estimates class thresholds as the 25th and 75th percentiles of the team
/// dissimilarity of `samples` unfiltered random teams.
pub fn calibrate_similarity_bands(
    domain: &NegotiationDomain,
    config: &GenerationConfig,
    samples: usize,
    seed: u64,
) -> Result<SimilarityBands> {
    if config.n_members < 2 {
        return Err(Error::TeamTooSmall {
            min: 2,
            got: config.n_members,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ds = Vec::with_capacity(samples);
    for _ in 0..samples.max(1) {
        let team = random_team(&mut rng, domain, config)?;
        ds.push(team_dissimilarity(&team, domain, config.pr_grid)?);
    }
    ds.sort_by(f64::total_cmp);
    Ok(SimilarityBands {
        lower: percentile(&ds, 0.25),
        upper: percentile(&ds, 0.75),
    })
}

/// Linear-interpolated percentile of sorted data.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_case_study_domain, check_pr_compatibility};

    #[test]
    fn generated_profiles_are_valid_and_compatible() {
        let d = build_case_study_domain();
        let cfg = GenerationConfig::default();
        for class in SimilarityClass::ALL {
            let g = generate_profiles(&d, &cfg, class, 7).unwrap();
            assert_eq!(g.members.len(), 4);
            assert_eq!(cfg.bands.classify(g.dissimilarity), class);
            assert!(check_pr_compatibility(&g.members, &d));
            for m in &g.members {
                assert!((m.weights().iter().sum::<f64>() - 1.0).abs() < 1e-9);
                for &j in d.un() {
                    let Valuation::Table { scores } = &m.valuations()[j] else {
                        panic!("table expected")
                    };
                    assert!(scores.contains(&0.0) && scores.contains(&1.0));
                }
                assert!((0.5..=1.0).contains(&m.beta()));
                assert_eq!(m.ru(), 0.5);
            }
            assert_eq!(
                g.opponent.valuations()[0].direction(),
                Some(Direction::Increasing)
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let d = build_case_study_domain();
        let cfg = GenerationConfig::default();
        let a = generate_profiles(&d, &cfg, SimilarityClass::Average, 3).unwrap();
        let b = generate_profiles(&d, &cfg, SimilarityClass::Average, 3).unwrap();
        assert_eq!(a.members, b.members);
        assert_eq!(a.opponent, b.opponent);
    }

    #[test]
    fn single_member_is_accepted_immediately() {
        let d = build_case_study_domain();
        let cfg = GenerationConfig {
            n_members: 1,
            ..Default::default()
        };
        let g = generate_profiles(&d, &cfg, SimilarityClass::Similar, 1).unwrap();
        assert_eq!(g.members.len(), 1);
        assert_eq!(g.attempts, 1);
    }

    #[test]
    fn exhausted_budget_names_the_band() {
        let d = build_case_study_domain();
        let cfg = GenerationConfig {
            max_attempts: 3,
            bands: SimilarityBands {
                lower: -1.0,
                upper: -1.0,
            },
            ..Default::default()
        };
        let err = generate_profiles(&d, &cfg, SimilarityClass::Similar, 1).unwrap_err();
        assert!(matches!(err, Error::GenerationFailed { attempts: 3, .. }));
    }

    #[test]
    fn importance_band_is_enforced() {
        let d = build_case_study_domain();
        for band in [ImportanceBand::Low, ImportanceBand::Average, ImportanceBand::High] {
            let cfg = GenerationConfig {
                importance: Some(band),
                ..Default::default()
            };
            let g = generate_profiles(&d, &cfg, SimilarityClass::Average, 11).unwrap();
            let (lo, hi) = band.range();
            for m in &g.members {
                let i = m.unpredictable_importance();
                assert!(i >= lo - 1e-9 && i <= hi + 1e-9, "{i} outside {band}");
            }
        }
    }

    #[test]
    fn hotel_side_team_prefers_high_prices() {
        let d = build_case_study_domain();
        let cfg = GenerationConfig {
            team_direction: Direction::Increasing,
            ..Default::default()
        };
        let g = generate_profiles(&d, &cfg, SimilarityClass::Average, 2).unwrap();
        assert_eq!(
            g.members[0].valuations()[0].direction(),
            Some(Direction::Increasing)
        );
        assert_eq!(
            g.opponent.valuations()[0].direction(),
            Some(Direction::Decreasing)
        );
    }

    #[test]
    fn percentile_interpolates() {
        assert_eq!(percentile(&[0.0, 1.0, 2.0, 3.0, 4.0], 0.25), 1.0);
        assert_eq!(percentile(&[0.0, 1.0], 0.5), 0.5);
    }
}
