use serde::Serialize;

use crate::domain::{NegotiationDomain, PartialOffer, UnSpace, Value};

/// Which party a model describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelTarget {
    Team,
    Opponent,
}

/// Naive-Bayes classifier of whether a party finds an unpredictable partial
/// offer acceptable, learnt online from labelled partial offers.
///
/// Conditionals are `(count + alpha) / (n_h + alpha * |D_j|)` and the prior
/// is `(n_h + alpha) / (n + 2 alpha)`; with no samples the posterior is 0.5.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesianAcceptanceModel {
    target: ModelTarget,
    alpha: f64,
    /// Labels per UN issue, in UN order.
    cardinalities: Vec<usize>,
    /// `counts[h][k][v]` with `h = 0` acceptable, `h = 1` not.
    counts: [Vec<Vec<u64>>; 2],
    samples: [u64; 2],
}

/// One row of [`BayesianAcceptanceModel::dump`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelRow {
    pub target: ModelTarget,
    pub issue: usize,
    pub value: usize,
    pub acceptable: bool,
    pub count: u64,
    pub samples: u64,
    pub conditional: f64,
}

impl BayesianAcceptanceModel {
    pub const DEFAULT_ALPHA: f64 = 1.0;

    /// Model over the unpredictable issues of `domain`, which must all be
    /// discrete.
    pub fn new(target: ModelTarget, domain: &NegotiationDomain, alpha: f64) -> Self {
        let cardinalities = domain
            .un()
            .iter()
            .map(|&j| domain.issue(j).domain.cardinality().unwrap_or(1))
            .collect();
        Self::with_cardinalities(target, cardinalities, alpha)
    }

    pub fn with_cardinalities(target: ModelTarget, cardinalities: Vec<usize>, alpha: f64) -> Self {
        let zero: Vec<Vec<u64>> = cardinalities.iter().map(|&n| vec![0; n]).collect();
        BayesianAcceptanceModel {
            target,
            alpha,
            counts: [zero.clone(), zero],
            samples: [0, 0],
            cardinalities,
        }
    }

    pub fn target(&self) -> ModelTarget {
        self.target
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn samples(&self, acceptable: bool) -> u64 {
        self.samples[h(acceptable)]
    }

    pub fn count(&self, acceptable: bool, k: usize, value: usize) -> u64 {
        self.counts[h(acceptable)][k][value]
    }

    pub fn update(&mut self, partial: &PartialOffer, acceptable: bool) {
        let codes: Vec<u16> = partial
            .values
            .iter()
            .map(|v| match v {
                Value::Label(i) => *i as u16,
                Value::Real(_) => 0,
            })
            .collect();
        self.update_codes(&codes, acceptable);
    }

    pub fn update_codes(&mut self, codes: &[u16], acceptable: bool) {
        let hyp = h(acceptable);
        self.samples[hyp] += 1;
        for (k, &c) in codes.iter().enumerate() {
            self.counts[hyp][k][c as usize] += 1;
        }
    }

    /// `p(h)`.
    pub fn prior(&self, acceptable: bool) -> f64 {
        let n = (self.samples[0] + self.samples[1]) as f64;
        (self.samples[h(acceptable)] as f64 + self.alpha) / (n + 2.0 * self.alpha)
    }

    /// `p(x_k = value | h)` for the `k`-th unpredictable issue.
    pub fn conditional(&self, acceptable: bool, k: usize, value: usize) -> f64 {
        let hyp = h(acceptable);
        let num = self.counts[hyp][k][value] as f64 + self.alpha;
        let den = self.samples[hyp] as f64 + self.alpha * self.cardinalities[k] as f64;
        if den > 0.0 {
            num / den
        } else {
            1.0 / self.cardinalities[k] as f64
        }
    }

    fn empty(&self) -> bool {
        self.samples[0] + self.samples[1] == 0
    }

    /// `p(acc | X')`.
    pub fn posterior(&self, partial: &PartialOffer) -> f64 {
        let codes: Vec<u16> = partial
            .values
            .iter()
            .map(|v| v.as_label().unwrap_or(0) as u16)
            .collect();
        self.posterior_codes(&codes)
    }

    pub fn posterior_codes(&self, codes: &[u16]) -> f64 {
        if self.empty() {
            return 0.5;
        }
        let mut acc = self.prior(true);
        let mut rej = self.prior(false);
        for (k, &c) in codes.iter().enumerate() {
            acc *= self.conditional(true, k, c as usize);
            rej *= self.conditional(false, k, c as usize);
        }
        normalized(acc, rej)
    }

    /// Posterior of every partial offer of `space`, in index order.
    pub fn posterior_table(&self, space: &UnSpace) -> Vec<f64> {
        if self.empty() {
            return vec![0.5; space.len()];
        }
        let cond: [Vec<Vec<f64>>; 2] = [true, false].map(|acc| {
            self.cardinalities
                .iter()
                .enumerate()
                .map(|(k, &n)| (0..n).map(|v| self.conditional(acc, k, v)).collect())
                .collect()
        });
        let (pa, pr) = (self.prior(true), self.prior(false));
        (0..space.len())
            .map(|i| {
                let mut acc = pa;
                let mut rej = pr;
                for (k, &c) in space.codes(i).iter().enumerate() {
                    acc *= cond[0][k][c as usize];
                    rej *= cond[1][k][c as usize];
                }
                normalized(acc, rej)
            })
            .collect()
    }

    /// Counts and conditionals per (issue, value, hypothesis).
    pub fn dump(&self) -> Vec<ModelRow> {
        let mut rows = Vec::new();
        for (k, &n) in self.cardinalities.iter().enumerate() {
            for value in 0..n {
                for acceptable in [true, false] {
                    rows.push(ModelRow {
                        target: self.target,
                        issue: k,
                        value,
                        acceptable,
                        count: self.count(acceptable, k, value),
                        samples: self.samples(acceptable),
                        conditional: self.conditional(acceptable, k, value),
                    });
                }
            }
        }
        rows
    }
}

fn h(acceptable: bool) -> usize {
    if acceptable {
        0
    } else {
        1
    }
}

fn normalized(acc: f64, rej: f64) -> f64 {
    let z = acc + rej;
    if z > 0.0 {
        acc / z
    } else {
        0.5
    }
}
