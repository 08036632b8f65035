use crate::domain::{NegotiationDomain, Offer};

/// Order in which the mediator settles predictable issues: the issues the
/// opponent has conceded most on (least important to it) come first.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcessionOrder {
    issues: Vec<usize>,
    scores: Vec<f64>,
}

impl ConcessionOrder {
    /// Each issue's score is the largest normalized distance between any
    /// opponent offer and the opponent's first offer. Sorted by descending
    /// score, ties by ascending issue id; identity order without history.
    pub fn from_opponent_offers(domain: &NegotiationDomain, offers: &[Offer]) -> Self {
        let pr = domain.pr();
        let mut scores = vec![0.0; pr.len()];
        if let Some(first) = offers.first() {
            for (k, &j) in pr.iter().enumerate() {
                let d = &domain.issue(j).domain;
                let origin = d.position(first.values[j]);
                scores[k] = offers
                    .iter()
                    .map(|o| (d.position(o.values[j]) - origin).abs())
                    .fold(0.0, f64::max);
            }
        }
        let mut idx: Vec<usize> = (0..pr.len()).collect();
        idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(pr[a].cmp(&pr[b])));
        ConcessionOrder {
            issues: idx.iter().map(|&k| pr[k]).collect(),
            scores: idx.iter().map(|&k| scores[k]).collect(),
        }
    }

    pub fn issues(&self) -> &[usize] {
        &self.issues
    }

    /// Scores aligned with [`issues`](Self::issues).
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }
}
