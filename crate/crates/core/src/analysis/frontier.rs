use crate::domain::{AgentProfile, NegotiationDomain, Offer, Value};
use crate::error::{Error, Result};

/// Largest discretized outcome space enumerated by default.
pub const DEFAULT_FRONTIER_BUDGET: usize = 2_000_000;

/// Nondominated `(team joint utility, opponent utility)` points, sorted by
/// team joint utility ascending. Opponent utility is then strictly
/// descending.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoFrontier {
    points: Vec<(f64, f64)>,
    /// Offer realising each point; empty when built from bare points.
    offers: Vec<Offer>,
}

impl ParetoFrontier {
    /// Nondominated subset of `points`; duplicates collapse to one point.
    pub fn from_points(points: &[(f64, f64)]) -> Self {
        let keep = nondominated(points);
        ParetoFrontier {
            points: keep.iter().map(|&i| points[i]).collect(),
            offers: Vec::new(),
        }
    }

    /// Exact frontier over every offer of the domain, with real issues
    /// discretized to `pr_grid` evenly spaced values. Each side's utility is
    /// the product of its members' utilities, so a single opponent is a
    /// one-member side.
    pub fn compute(
        domain: &NegotiationDomain,
        team: &[AgentProfile],
        opponent: &[AgentProfile],
        pr_grid: usize,
        budget: usize,
    ) -> Result<Self> {
        if team.is_empty() || opponent.is_empty() {
            return Err(Error::TeamTooSmall { min: 1, got: 0 });
        }
        if let Some(p) = team.iter().chain(opponent).find(|p| p.num_issues() != domain.len()) {
            return Err(Error::DomainMismatch(format!(
                "profile has {} issues, domain has {}",
                p.num_issues(),
                domain.len()
            )));
        }
        let grids: Vec<Vec<Value>> = domain.issues().iter().map(|i| i.domain.grid(pr_grid)).collect();
        let points_total = grids
            .iter()
            .try_fold(1usize, |acc, g| acc.checked_mul(g.len()))
            .filter(|&n| n <= budget)
            .ok_or_else(|| Error::BudgetExceeded {
                points: grids.iter().fold(1usize, |acc, g| acc.saturating_mul(g.len())),
                budget,
            })?;

        let profiles: Vec<&AgentProfile> = team.iter().chain(opponent).collect();
        // terms[p][j][v] = w_j * V_j(grid value v) for profile p.
        let terms: Vec<Vec<Vec<f64>>> = profiles
            .iter()
            .map(|p| {
                grids
                    .iter()
                    .enumerate()
                    .map(|(j, g)| g.iter().map(|&v| p.term(j, v)).collect())
                    .collect()
            })
            .collect();

        let n = grids.len();
        let np = profiles.len();
        let mut digits = vec![0usize; n];
        // prefix[p * (n + 1) + k]: sum of the first k terms, in issue order.
        let mut prefix = vec![0.0f64; np * (n + 1)];
        let mut points = Vec::with_capacity(points_total);
        let mut from = 0;
        loop {
            for p in 0..np {
                let row = &mut prefix[p * (n + 1)..(p + 1) * (n + 1)];
                for k in from..n {
                    row[k + 1] = row[k] + terms[p][k][digits[k]];
                }
            }
            let u = |p: usize| prefix[p * (n + 1) + n];
            let team_u: f64 = (0..team.len()).map(u).product();
            let opp_u: f64 = (team.len()..np).map(u).product();
            points.push((team_u, opp_u));

            // Odometer, last issue fastest.
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(Self::finish(&points, &digits_decoder(&grids)));
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < grids[k].len() {
                    break;
                }
                digits[k] = 0;
            }
            from = k;
        }
    }

    fn finish(points: &[(f64, f64)], decode: &dyn Fn(usize) -> Offer) -> Self {
        let keep = nondominated(points);
        ParetoFrontier {
            points: keep.iter().map(|&i| points[i]).collect(),
            offers: keep.iter().map(|&i| decode(i)).collect(),
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Offers realising [`Self::points`], when known.
    pub fn offers(&self) -> &[Offer] {
        &self.offers
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn write_csv<W: std::io::Write>(&self, domain: &NegotiationDomain, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["team_joint".to_string(), "opponent".to_string()];
        if !self.offers.is_empty() {
            header.extend(domain.issues().iter().map(|i| i.name.clone()));
        }
        out.write_record(&header)?;
        for (i, &(t, o)) in self.points.iter().enumerate() {
            let mut row = vec![t.to_string(), o.to_string()];
            if let Some(offer) = self.offers.get(i) {
                row.extend(offer.values.iter().enumerate().map(|(j, &v)| domain.describe(j, v)));
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Maps an enumeration index back to its offer.
fn digits_decoder(grids: &[Vec<Value>]) -> impl Fn(usize) -> Offer + '_ {
    move |mut idx| {
        let mut values = vec![Value::Label(0); grids.len()];
        for (j, g) in grids.iter().enumerate().rev() {
            values[j] = g[idx % g.len()];
            idx /= g.len();
        }
        Offer::new(values)
    }
}

/// Indices of the nondominated points, sorted by the first coordinate
/// ascending; among equal points the lowest index is kept.
fn nondominated(points: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a], points[b]);
        pb.0.total_cmp(&pa.0).then(pb.1.total_cmp(&pa.1)).then(a.cmp(&b))
    });
    let mut keep = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for i in order {
        if points[i].1 > best {
            best = points[i].1;
            keep.push(i);
        }
    }
    keep.reverse();
    keep
}

/// Euclidean distance from `point` to the closest frontier point.
///
/// # Panics
/// On an empty frontier.
pub fn pareto_distance(point: (f64, f64), frontier: &ParetoFrontier) -> f64 {
    assert!(!frontier.is_empty(), "empty Pareto frontier");
    frontier
        .points
        .iter()
        .map(|&(t, o)| ((point.0 - t).powi(2) + (point.1 - o).powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min)
}
