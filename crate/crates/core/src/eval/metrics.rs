use std::collections::BTreeSet;

use serde::Serialize;

use super::EvalError;
use crate::cascade::Cascade;
use crate::classifiers::Prediction;

/// Confusion counts over hidden nodes, infected being the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub true_positive: usize,
    pub false_positive: usize,
    pub false_negative: usize,
    pub true_negative: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.true_positive + self.false_positive + self.false_negative + self.true_negative
    }

    /// `TP / (TP + FP)`, 0 when nothing was predicted infected.
    pub fn precision(&self) -> f64 {
        ratio(self.true_positive, self.true_positive + self.false_positive)
    }

    /// `TP / (TP + FN)`, 0 when nothing was infected.
    pub fn recall(&self) -> f64 {
        ratio(self.true_positive, self.true_positive + self.false_negative)
    }

    pub fn f_measure(&self) -> f64 {
        f_measure(self.precision(), self.recall())
    }

    pub fn add(&mut self, other: &Confusion) {
        self.true_positive += other.true_positive;
        self.false_positive += other.false_positive;
        self.false_negative += other.false_negative;
        self.true_negative += other.true_negative;
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Score predictions that cover exactly the `hidden` nodes.
pub fn score(preds: &[Prediction], truth: &Cascade, hidden: &[usize]) -> Result<Confusion, EvalError> {
    let expected: BTreeSet<usize> = hidden.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut c = Confusion::default();
    for p in preds {
        if !expected.contains(&p.node) || !seen.insert(p.node) {
            return Err(EvalError::Coverage(format!(
                "prediction for node {} is not a distinct hidden node",
                p.node
            )));
        }
        match (p.infected, truth.is_infected(p.node)) {
            (true, true) => c.true_positive += 1,
            (true, false) => c.false_positive += 1,
            (false, true) => c.false_negative += 1,
            (false, false) => c.true_negative += 1,
        }
    }
    if seen.len() != expected.len() {
        return Err(EvalError::Coverage(format!(
            "{} predictions for {} hidden nodes",
            seen.len(),
            expected.len()
        )));
    }
    Ok(c)
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's coefficient: Pearson correlation of average ranks.
pub fn rank_correlation(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    if x.len() != y.len() || x.is_empty() {
        return Err(EvalError::InvalidInput(format!(
            "rank correlation needs equal nonzero lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(EvalError::UndefinedCorrelation);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Mean and standard error of the mean (sample standard deviation over
/// `sqrt(k)`; 0 for fewer than two values).
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}
