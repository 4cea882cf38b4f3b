//! Detection metrics: confusion counts, Fmeasure, Gmean and ROC AUC.

use crate::error::{LookoutError, Result};
use crate::scalar::{cmp, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Sensitivity / recall / true positive rate.
    pub fn tpr(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn fpr(&self) -> f64 {
        ratio(self.fp, self.fp + self.tn)
    }

    pub fn specificity(&self) -> f64 {
        ratio(self.tn, self.tn + self.fp)
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }
}

/// `a / b` with `0/0 = 0`.
fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Counts with label `true` = actual anomaly and flag `true` = predicted anomaly.
pub fn confusion(flags: &[bool], labels: &[bool]) -> Result<ConfusionCounts> {
    if flags.len() != labels.len() {
        return Err(LookoutError::DimensionMismatch { expected: labels.len(), got: flags.len() });
    }
    let mut c = ConfusionCounts::default();
    for (&pred, &actual) in flags.iter().zip(labels) {
        match (actual, pred) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Harmonic mean of precision and recall; 0 when there are no true positives.
pub fn fmeasure(c: &ConfusionCounts) -> f64 {
    if c.tp == 0 {
        return 0.0;
    }
    let (p, r) = (c.precision(), c.tpr());
    2.0 * p * r / (p + r)
}

/// Geometric mean of sensitivity and specificity.
pub fn gmean(c: &ConfusionCounts) -> f64 {
    (c.tpr() * c.specificity()).sqrt()
}

/// Area under the ROC curve for scores where LOWER means more anomalous.
///
/// Mann-Whitney form: the probability that a random positive scores below a
/// random negative, ties counting ½. Computed from mid-ranks in O(n log n).
pub fn roc_auc<T: Scalar>(scores: &[T], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(LookoutError::DimensionMismatch { expected: labels.len(), got: scores.len() });
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(LookoutError::InvalidParameter(
            "AUC needs at least one positive and one negative label".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| cmp(&scores[a], &scores[b]));

    // Sum of mid-ranks (1-based, ascending score) over the negatives.
    let mut negative_rank_sum = 0.0f64;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let mid_rank = (start + end + 1) as f64 / 2.0;
        let tied_negatives = order[start..end].iter().filter(|&&i| !labels[i]).count();
        negative_rank_sum += mid_rank * tied_negatives as f64;
        start = end;
    }
    let n_neg = negatives as f64;
    let u = negative_rank_sum - n_neg * (n_neg + 1.0) / 2.0;
    Ok(u / (positives as f64 * n_neg))
}
