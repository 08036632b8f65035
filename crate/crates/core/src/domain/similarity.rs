use super::{AgentProfile, NegotiationDomain};
use crate::error::{Error, Result};

/// Points per real issue when a mixed domain is discretized for enumeration.
pub const DEFAULT_PR_GRID: usize = 11;

/// Utility differences `U_a - U_b` restricted to `issues`, over the cartesian
/// product of their grids.
fn difference_terms(
    a: &AgentProfile,
    b: &AgentProfile,
    domain: &NegotiationDomain,
    issues: &[usize],
    grid: usize,
) -> Vec<f64> {
    let mut acc = vec![0.0];
    for &j in issues {
        let deltas: Vec<f64> = domain
            .issue(j)
            .domain
            .grid(grid)
            .into_iter()
            .map(|v| a.term(j, v) - b.term(j, v))
            .collect();
        acc = acc
            .iter()
            .flat_map(|d| deltas.iter().map(move |e| d + e))
            .collect();
    }
    acc
}

/// Mean absolute utility difference between two profiles over every offer of
/// the discretized domain. Real issues are sampled at `pr_grid` evenly spaced
/// points; discrete issues contribute every label.
///
/// The offer space factors into PR and UN parts, so the mean of `|x + y|`
/// over the product is computed from the sorted PR differences with prefix
/// sums instead of a full enumeration.
pub fn dissimilarity(
    a: &AgentProfile,
    b: &AgentProfile,
    domain: &NegotiationDomain,
    pr_grid: usize,
) -> f64 {
    let grid = pr_grid.max(2);
    let un = difference_terms(a, b, domain, domain.un(), grid);
    let mut pr = difference_terms(a, b, domain, domain.pr(), grid);
    pr.sort_by(f64::total_cmp);
    let mut prefix = Vec::with_capacity(pr.len() + 1);
    prefix.push(0.0);
    for &y in &pr {
        prefix.push(prefix.last().unwrap() + y);
    }
    let total = *prefix.last().unwrap();
    let m = pr.len();
    let mut sum = 0.0;
    for &x in &un {
        // Split the PR differences at -x: below it x + y < 0.
        let k = pr.partition_point(|&y| y < -x);
        let neg = -(k as f64 * x + prefix[k]);
        let pos = (m - k) as f64 * x + (total - prefix[k]);
        sum += neg + pos;
    }
    (sum / (un.len() * m) as f64).max(0.0)
}

/// Mean pairwise [`dissimilarity`] over every unordered pair of members.
pub fn team_dissimilarity(
    team: &[AgentProfile],
    domain: &NegotiationDomain,
    pr_grid: usize,
) -> Result<f64> {
    if team.len() < 2 {
        return Err(Error::TeamTooSmall {
            min: 2,
            got: team.len(),
        });
    }
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..team.len() {
        for k in i + 1..team.len() {
            sum += dissimilarity(&team[i], &team[k], domain, pr_grid);
            pairs += 1;
        }
    }
    Ok(sum / pairs as f64)
}

/// Total weight a profile puts on unpredictable issues.
pub fn unpredictable_importance(profile: &AgentProfile) -> f64 {
    profile.unpredictable_importance()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{
        build_case_study_domain, Direction, Issue, IssueKind, StrategyParams, Valuation,
    };

    fn binary(scores: [f64; 2]) -> (NegotiationDomain, AgentProfile) {
        let d = NegotiationDomain::new(vec![Issue::discrete(
            0,
            "x",
            IssueKind::Unpredictable,
            &["a", "b"],
        )])
        .unwrap();
        let p = AgentProfile::new(
            &d,
            vec![1.0],
            vec![Valuation::table(scores.to_vec())],
            0.0,
            1.0,
            StrategyParams::default(),
        )
        .unwrap();
        (d, p)
    }

    #[test]
    fn opposite_binary_profiles_are_maximally_dissimilar() {
        let (d, a) = binary([0.0, 1.0]);
        let (_, b) = binary([1.0, 0.0]);
        assert_eq!(dissimilarity(&a, &b, &d, 11), 1.0);
        assert_eq!(dissimilarity(&a, &a, &d, 11), 0.0);
    }

    fn hotel_profile(d: &NegotiationDomain, w: [f64; 7], seed: u64) -> AgentProfile {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut vals = vec![
            Valuation::linear(200.0, 400.0, Direction::Decreasing),
            Valuation::linear(0.0, 50.0, Direction::Decreasing),
        ];
        for &j in d.un() {
            let n = d.issue(j).domain.cardinality().unwrap();
            vals.push(Valuation::table((0..n).map(|_| next()).collect()));
        }
        AgentProfile::new(d, w.to_vec(), vals, 0.5, 1.0, StrategyParams::default()).unwrap()
    }

    /// Full enumeration of the discretized offer space.
    fn brute(a: &AgentProfile, b: &AgentProfile, d: &NegotiationDomain, grid: usize) -> f64 {
        let grids: Vec<_> = d.issues().iter().map(|i| i.domain.grid(grid)).collect();
        let mut idx = vec![0usize; d.len()];
        let (mut sum, mut n) = (0.0, 0usize);
        loop {
            let offer: Vec<_> = idx.iter().enumerate().map(|(j, &k)| grids[j][k]).collect();
            sum += (a.utility_unchecked(&offer) - b.utility_unchecked(&offer)).abs();
            n += 1;
            let mut j = d.len();
            loop {
                if j == 0 {
                    return sum / n as f64;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < grids[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    #[test]
    fn factored_mean_matches_full_enumeration() {
        let d = build_case_study_domain();
        let a = hotel_profile(&d, [0.1, 0.1, 0.2, 0.2, 0.1, 0.2, 0.1], 1);
        let b = hotel_profile(&d, [0.05, 0.15, 0.3, 0.1, 0.1, 0.1, 0.2], 2);
        let fast = dissimilarity(&a, &b, &d, 3);
        let slow = brute(&a, &b, &d, 3);
        assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
        assert!((dissimilarity(&b, &a, &d, 3) - fast).abs() < 1e-12);
    }

    #[test]
    fn team_dissimilarity_is_pair_mean() {
        let d = build_case_study_domain();
        let a = hotel_profile(&d, [0.1, 0.1, 0.2, 0.2, 0.1, 0.2, 0.1], 3);
        let b = hotel_profile(&d, [0.2, 0.1, 0.2, 0.1, 0.1, 0.2, 0.1], 4);
        let c = hotel_profile(&d, [0.3, 0.1, 0.1, 0.1, 0.1, 0.2, 0.1], 5);
        let team = [a.clone(), b.clone(), c.clone()];
        let expect = (dissimilarity(&a, &b, &d, 11)
            + dissimilarity(&a, &c, &d, 11)
            + dissimilarity(&b, &c, &d, 11))
            / 3.0;
        assert!((team_dissimilarity(&team, &d, 11).unwrap() - expect).abs() < 1e-15);
        assert_eq!(
            team_dissimilarity(&team[..2], &d, 11).unwrap(),
            dissimilarity(&a, &b, &d, 11)
        );
        assert!(team_dissimilarity(&team[..1], &d, 11).is_err());
    }

    #[test]
    fn importance_sums_un_weights() {
        let d = build_case_study_domain();
        let p = hotel_profile(&d, [0.3, 0.2, 0.2, 0.1, 0.1, 0.05, 0.05], 6);
        assert!((unpredictable_importance(&p) - 0.5).abs() < 1e-12);
        assert!((p.max_pr() - 0.5).abs() < 1e-12);
    }
}
