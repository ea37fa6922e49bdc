use crate::error::{Error, Result};

/// Square matrix of weights, rows = actual class, columns = predicted class.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<f64>>,
}

impl ConfusionMatrix {
    pub fn new(num_classes: usize) -> Self {
        ConfusionMatrix { counts: vec![vec![0.0; num_classes]; num_classes] }
    }

    pub fn from_counts(counts: Vec<Vec<f64>>) -> Result<Self> {
        let n = counts.len();
        if counts.iter().any(|r| r.len() != n) {
            return Err(Error::usage("confusion matrix must be square"));
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn add(&mut self, actual: usize, predicted: usize, weight: f64) {
        self.counts[actual][predicted] += weight;
    }

    pub fn counts(&self) -> &[Vec<f64>] {
        &self.counts
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> f64 {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_total(&self, c: usize) -> f64 {
        self.counts[c].iter().sum()
    }

    pub fn col_total(&self, c: usize) -> f64 {
        self.counts.iter().map(|r| r[c]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        self.correct() / self.total()
    }

    /// Chance-corrected agreement. Defined as 1 when chance agreement is 1.
    pub fn kappa(&self) -> f64 {
        let total = self.total();
        let observed = self.correct() / total;
        let chance: f64 =
            (0..self.num_classes()).map(|c| self.row_total(c) * self.col_total(c)).sum::<f64>() / (total * total);
        if chance < 1.0 {
            (observed - chance) / (1.0 - chance)
        } else {
            1.0
        }
    }

    /// One-vs-rest metrics per class plus the actual-count weighted average.
    /// ROC areas are left unset; they need scores, not counts.
    pub fn class_metrics(&self) -> ClassTable {
        let total = self.total();
        let n = self.num_classes();
        let rows: Vec<ClassMetrics> = (0..n)
            .map(|c| {
                let tp = self.counts[c][c];
                let actual = self.row_total(c);
                let predicted = self.col_total(c);
                let fp = predicted - tp;
                let negatives = total - actual;
                let mut undefined = false;
                let mut ratio = |num: f64, den: f64| {
                    if den > 0.0 {
                        num / den
                    } else {
                        undefined = true;
                        0.0
                    }
                };
                let tp_rate = ratio(tp, actual);
                let fp_rate = ratio(fp, negatives);
                let precision = ratio(tp, predicted);
                let f_measure = ratio(2.0 * precision * tp_rate, precision + tp_rate);
                ClassMetrics { tp_rate, fp_rate, precision, recall: tp_rate, f_measure, roc_area: None, undefined }
            })
            .collect();
        let weighted = weighted_average(&rows, &(0..n).map(|c| self.row_total(c)).collect::<Vec<_>>());
        ClassTable { rows, weighted }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub tp_rate: f64,
    pub fp_rate: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub roc_area: Option<f64>,
    /// Set when some ratio had a zero denominator and was reported as 0.
    pub undefined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassTable {
    pub rows: Vec<ClassMetrics>,
    pub weighted: ClassMetrics,
}

pub(crate) fn weighted_average(rows: &[ClassMetrics], weights: &[f64]) -> ClassMetrics {
    let total: f64 = weights.iter().sum();
    let avg = |f: &dyn Fn(&ClassMetrics) -> f64| {
        if total > 0.0 {
            rows.iter().zip(weights).map(|(r, w)| f(r) * w).sum::<f64>() / total
        } else {
            0.0
        }
    };
    let roc_area =
        if rows.iter().all(|r| r.roc_area.is_some()) { Some(avg(&|r| r.roc_area.unwrap_or(0.0))) } else { None };
    ClassMetrics {
        tp_rate: avg(&|r| r.tp_rate),
        fp_rate: avg(&|r| r.fp_rate),
        precision: avg(&|r| r.precision),
        recall: avg(&|r| r.recall),
        f_measure: avg(&|r| r.f_measure),
        roc_area,
        undefined: rows.iter().any(|r| r.undefined),
    }
}

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs where the positive scores higher, ties counting
/// one half.
pub fn roc_auc(scores: &[f64], positives: &[bool]) -> Result<f64> {
    if scores.len() != positives.len() {
        return Err(Error::usage("scores and labels differ in length"));
    }
    let n_pos = positives.iter().filter(|&&p| p).count();
    let n_neg = positives.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::usage("ROC area needs at least one positive and one negative instance"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // sum of positive ranks, tied groups get their mid-rank
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += mid * order[i..=j].iter().filter(|&&k| positives[k]).count() as f64;
        i = j + 1;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}
