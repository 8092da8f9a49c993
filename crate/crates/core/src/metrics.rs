//! Ranking metrics over labeled anomaly scores.

use std::cmp::Ordering;

use crate::error::{EifError, Result};
use crate::scalar::Scalar;

/// Scores paired with ground truth, `1` = anomaly, `0` = nominal.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledScores<T> {
    scores: Vec<T>,
    labels: Vec<u8>,
}

impl<T: Scalar> LabeledScores<T> {
    pub fn new(scores: Vec<T>, labels: Vec<u8>) -> Result<Self> {
        if scores.len() != labels.len() {
            return Err(EifError::invalid(format!(
                "{} scores but {} labels",
                scores.len(),
                labels.len()
            )));
        }
        if let Some(l) = labels.iter().find(|&&l| l > 1) {
            return Err(EifError::invalid(format!("label {l} is not 0 or 1")));
        }
        crate::dataset::check_finite(&scores)?;
        Ok(Self { scores, labels })
    }

    pub fn scores(&self) -> &[T] {
        &self.scores
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    /// Runs of equal score as `(positives, negatives)`, highest score first.
    fn tie_groups_descending(&self) -> Vec<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.scores.len()).collect();
        order.sort_by(|&a, &b| cmp(self.scores[b], self.scores[a]));
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut prev: Option<T> = None;
        for i in order {
            let s = self.scores[i];
            if prev != Some(s) {
                groups.push((0, 0));
                prev = Some(s);
            }
            let g = groups.last_mut().expect("pushed above");
            if self.labels[i] == 1 {
                g.0 += 1;
            } else {
                g.1 += 1;
            }
        }
        groups
    }
}

fn cmp<T: Scalar>(a: T, b: T) -> Ordering {
    a.partial_cmp(&b).expect("scores are finite")
}

/// Probability that a random anomaly outscores a random nominal point, ties
/// counting one half (Mann-Whitney statistic with midranks).
pub fn auroc<T: Scalar>(ls: &LabeledScores<T>) -> Result<f64> {
    let n_pos = ls.positives();
    let n_neg = ls.labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(EifError::UndefinedMetric("AUROC needs both classes"));
    }
    // ascending tie groups; ranks are 1-based
    let mut groups = ls.tie_groups_descending();
    groups.reverse();
    let mut rank_sum = 0.0;
    let mut below = 0usize;
    for (pos, neg) in groups {
        let size = pos + neg;
        let midrank = below as f64 + (size as f64 + 1.0) / 2.0;
        rank_sum += pos as f64 * midrank;
        below += size;
    }
    let n_pos_f = n_pos as f64;
    let u = rank_sum - n_pos_f * (n_pos_f + 1.0) / 2.0;
    Ok(u / (n_pos_f * n_neg as f64))
}

/// Average precision: `Σ precision · Δrecall` over score thresholds, highest
/// first, where each run of equal scores is admitted as one block.
pub fn auprc<T: Scalar>(ls: &LabeledScores<T>) -> Result<f64> {
    let n_pos = ls.positives();
    if n_pos == 0 {
        return Err(EifError::UndefinedMetric("AUPRC needs at least one anomaly"));
    }
    let mut tp = 0usize;
    let mut seen = 0usize;
    let mut ap = 0.0;
    for (pos, neg) in ls.tie_groups_descending() {
        tp += pos;
        seen += pos + neg;
        if pos > 0 {
            let precision = tp as f64 / seen as f64;
            let recall_step = pos as f64 / n_pos as f64;
            ap += precision * recall_step;
        }
    }
    Ok(ap)
}
