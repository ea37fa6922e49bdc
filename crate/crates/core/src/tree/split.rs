use crate::dataset::{CellValue, Dataset};

/// A row index paired with its weight.
pub type WeightedRow = (usize, f64);

/// Shannon entropy in bits of a weight vector. All-zero input yields 0.
pub fn entropy(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitStats {
    pub info_gain: f64,
    pub gain_ratio: f64,
    pub split_info: f64,
}

/// Class weights of `rows`, one slot per target value. Rows with a missing
/// target are skipped.
pub fn class_distribution(d: &Dataset, rows: &[WeightedRow], target: usize) -> Vec<f64> {
    let mut dist = vec![0.0; d.attribute(target).num_values()];
    for &(r, w) in rows {
        if let CellValue::Nominal(c) = d.instances()[r][target] {
            dist[c] += w;
        }
    }
    dist
}

/// Per-branch class weights for a nominal `attr`: `[value][class]`.
/// Rows with `attr` missing are left out.
pub fn branch_distributions(d: &Dataset, rows: &[WeightedRow], attr: usize, target: usize) -> Vec<Vec<f64>> {
    let classes = d.attribute(target).num_values();
    let mut out = vec![vec![0.0; classes]; d.attribute(attr).num_values()];
    for &(r, w) in rows {
        let row = &d.instances()[r];
        if let (CellValue::Nominal(v), CellValue::Nominal(c)) = (row[attr], row[target]) {
            out[v][c] += w;
        }
    }
    out
}

/// Information gain, split information and gain ratio of splitting `rows`
/// on the nominal attribute `attr`.
///
/// Rows whose `attr` is missing do not enter the branch entropies; the gain is
/// scaled by the known fraction of the weight. The ratio is 0 when the split
/// information is 0.
pub fn gain_and_ratio(d: &Dataset, rows: &[WeightedRow], attr: usize, target: usize) -> SplitStats {
    let branches = branch_distributions(d, rows, attr, target);
    stats_from_branches(&class_distribution(d, rows, target), &branches)
}

pub(crate) fn stats_from_branches(parent: &[f64], branches: &[Vec<f64>]) -> SplitStats {
    let total: f64 = parent.iter().sum();
    let sizes: Vec<f64> = branches.iter().map(|b| b.iter().sum()).collect();
    let known: f64 = sizes.iter().sum();
    if known <= 0.0 || total <= 0.0 {
        return SplitStats { info_gain: 0.0, gain_ratio: 0.0, split_info: 0.0 };
    }
    let mut known_parent = vec![0.0; parent.len()];
    for b in branches {
        for (k, w) in known_parent.iter_mut().zip(b) {
            *k += w;
        }
    }
    let remainder: f64 = branches.iter().zip(&sizes).map(|(b, &s)| s / known * entropy(b)).sum();
    let info_gain = (known / total * (entropy(&known_parent) - remainder)).max(0.0);
    let split_info = entropy(&sizes);
    let gain_ratio = if split_info > 0.0 { info_gain / split_info } else { 0.0 };
    SplitStats { info_gain, gain_ratio, split_info }
}
