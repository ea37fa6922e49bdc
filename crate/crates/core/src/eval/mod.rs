//! Stratified cross-validation and classifier evaluation statistics.

mod metrics;
mod report;

pub use metrics::{roc_auc, ClassMetrics, ClassTable, ConfusionMatrix};
pub use report::{format_report, summary_key_values, RunInfo, TestMode};

use rand::seq::SliceRandom;

use crate::dataset::{CellValue, Dataset};
use crate::error::{Error, Result};
use crate::rng;
use crate::tree::{build_tree, DecisionTree, TreeParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// Fold index of every instance.
    pub assignment: Vec<usize>,
}

impl FoldPlan {
    pub fn test_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == fold).collect()
    }

    pub fn train_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] != fold).collect()
    }
}

/// Assigns instances to `k` folds preserving class proportions.
///
/// Instance indices are shuffled with the seeded generator, grouped by class
/// (declaration order; missing targets last) keeping the shuffled order, then
/// dealt round-robin across folds. The dealing position carries over from one
/// class to the next, so overall fold sizes also differ by at most one.
pub fn stratified_folds(d: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    let target = d.target().ok_or_else(|| Error::usage("dataset has no target attribute"))?;
    if k < 2 {
        return Err(Error::usage(format!("need at least 2 folds, got {k}")));
    }
    if k > d.len() {
        return Err(Error::usage(format!("{k} folds requested for {} instances", d.len())));
    }
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.shuffle(&mut rng::seeded(seed));
    let class_key = |i: &usize| match d.instances()[*i][target] {
        CellValue::Nominal(c) => c,
        _ => usize::MAX,
    };
    order.sort_by_key(class_key);

    let mut assignment = vec![0; d.len()];
    for (pos, &i) in order.iter().enumerate() {
        assignment[i] = pos % k;
    }
    Ok(FoldPlan { k, seed, assignment })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub instance: usize,
    pub fold: usize,
    pub actual: usize,
    pub predicted: usize,
    pub distribution: Vec<f64>,
}

/// Pooled predictions of one evaluation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub class_names: Vec<String>,
    pub confusion: ConfusionMatrix,
    pub predictions: Vec<Prediction>,
    /// Class frequencies of each fold's training data; the baseline predictor
    /// for the relative error measures.
    pub priors: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub correct: f64,
    pub incorrect: f64,
    pub total: f64,
    pub accuracy: f64,
    pub kappa: f64,
    pub mae: f64,
    pub rmse: f64,
    /// Relative absolute error as a fraction of the prior baseline's.
    pub rae: f64,
    pub rrse: f64,
}

fn class_frequencies(d: &Dataset, rows: &[usize], target: usize) -> Vec<f64> {
    let mut counts = vec![0.0; d.attribute(target).num_values()];
    for &r in rows {
        if let CellValue::Nominal(c) = d.instances()[r][target] {
            counts[c] += 1.0;
        }
    }
    let total: f64 = counts.iter().sum();
    if total > 0.0 {
        counts.iter_mut().for_each(|c| *c /= total);
    }
    counts
}

impl Evaluation {
    fn empty(class_names: Vec<String>) -> Self {
        let n = class_names.len();
        Evaluation { class_names, confusion: ConfusionMatrix::new(n), predictions: Vec::new(), priors: Vec::new() }
    }

    /// Scores `tree` on `rows` of `d` as one fold whose baseline is `prior`.
    fn record(&mut self, tree: &DecisionTree, d: &Dataset, rows: &[usize], prior: Vec<f64>) {
        let fold = self.priors.len();
        self.priors.push(prior);
        for &r in rows {
            let inst = &d.instances()[r];
            let CellValue::Nominal(actual) = inst[tree.target] else { continue };
            let (predicted, distribution) = tree.predict(inst);
            self.confusion.add(actual, predicted, 1.0);
            self.predictions.push(Prediction { instance: r, fold, actual, predicted, distribution });
        }
    }

    pub fn summary(&self) -> Result<Summary> {
        let total = self.confusion.total();
        if total <= 0.0 || self.predictions.is_empty() {
            return Err(Error::usage("evaluation holds no instances"));
        }
        let nc = self.class_names.len() as f64;
        let (mut abs, mut sq, mut base_abs, mut base_sq) = (0.0, 0.0, 0.0, 0.0);
        for p in &self.predictions {
            let prior = &self.priors[p.fold];
            for (c, (&q, &b)) in p.distribution.iter().zip(prior).enumerate() {
                let t = if c == p.actual { 1.0 } else { 0.0 };
                abs += (q - t).abs();
                sq += (q - t).powi(2);
                base_abs += (b - t).abs();
                base_sq += (b - t).powi(2);
            }
        }
        let n = self.predictions.len() as f64;
        let mae = abs / (n * nc);
        let rmse = (sq / (n * nc)).sqrt();
        let base_mae = base_abs / (n * nc);
        let base_rmse = (base_sq / (n * nc)).sqrt();
        let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
        let correct = self.confusion.correct();
        Ok(Summary {
            correct,
            incorrect: total - correct,
            total,
            accuracy: correct / total,
            kappa: self.confusion.kappa(),
            mae,
            rmse,
            rae: ratio(mae, base_mae),
            rrse: ratio(rmse, base_rmse),
        })
    }

    /// Confusion-matrix metrics per class, with ROC areas from the pooled
    /// predicted probability of each class.
    pub fn per_class_metrics(&self) -> Result<ClassTable> {
        if self.predictions.is_empty() {
            return Err(Error::usage("evaluation holds no instances"));
        }
        let mut table = self.confusion.class_metrics();
        let scores_for = |c: usize| -> Vec<f64> { self.predictions.iter().map(|p| p.distribution[c]).collect() };
        for (c, row) in table.rows.iter_mut().enumerate() {
            let positives: Vec<bool> = self.predictions.iter().map(|p| p.actual == c).collect();
            row.roc_area = roc_auc(&scores_for(c), &positives).ok();
        }
        let weights: Vec<f64> = (0..table.rows.len()).map(|c| self.confusion.row_total(c)).collect();
        // classes without instances have no ROC area and no weight
        let present: Vec<usize> = (0..weights.len()).filter(|&c| weights[c] > 0.0).collect();
        let rows: Vec<ClassMetrics> = present.iter().map(|&c| table.rows[c].clone()).collect();
        let w: Vec<f64> = present.iter().map(|&c| weights[c]).collect();
        let mut weighted = metrics::weighted_average(&rows, &w);
        weighted.undefined = table.rows.iter().any(|r| r.undefined);
        table.weighted = weighted;
        Ok(table)
    }
}

/// Builds a tree on all of `d` and evaluates it on the same data.
pub fn evaluate_on_training(d: &Dataset, params: &TreeParams) -> Result<(DecisionTree, Evaluation)> {
    let tree = build_tree(d, params)?;
    let rows: Vec<usize> = (0..d.len()).collect();
    let mut ev = Evaluation::empty(tree.class_values().to_vec());
    ev.record(&tree, d, &rows, class_frequencies(d, &rows, tree.target));
    Ok((tree, ev))
}

pub fn cross_validate(d: &Dataset, params: &TreeParams, k: usize, seed: u64) -> Result<Evaluation> {
    cross_validate_threaded(d, params, k, seed, 1)
}

/// As [`cross_validate`], training folds on up to `threads` threads. The
/// result does not depend on the thread count.
pub fn cross_validate_threaded(
    d: &Dataset,
    params: &TreeParams,
    k: usize,
    seed: u64,
    threads: usize,
) -> Result<Evaluation> {
    let plan = stratified_folds(d, k, seed)?;
    let target = d.target().expect("checked by stratified_folds");
    let run_fold = |fold: usize| -> Result<(DecisionTree, Vec<usize>, Vec<f64>)> {
        let train = plan.train_rows(fold);
        let tree = build_tree(&d.subset(&train), params)?;
        Ok((tree, plan.test_rows(fold), class_frequencies(d, &train, target)))
    };

    let folds: Vec<Result<_>> = if threads <= 1 {
        (0..k).map(run_fold).collect()
    } else {
        let mut slots: Vec<Option<Result<_>>> = (0..k).map(|_| None).collect();
        let chunk = k.div_ceil(threads);
        std::thread::scope(|s| {
            for (c, part) in slots.chunks_mut(chunk).enumerate() {
                let run_fold = &run_fold;
                s.spawn(move || {
                    for (j, slot) in part.iter_mut().enumerate() {
                        *slot = Some(run_fold(c * chunk + j));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.expect("fold evaluated")).collect()
    };

    let class_names = d.class_values().expect("nominal target").to_vec();
    let mut ev = Evaluation::empty(class_names);
    for fold in folds {
        let (tree, test, prior) = fold?;
        ev.record(&tree, d, &test, prior);
    }
    Ok(ev)
}
