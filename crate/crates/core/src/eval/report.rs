use std::fmt::Write;

use super::{ClassMetrics, ClassTable, Evaluation, Summary};
use crate::error::Result;
use crate::textfmt::{class_tag, num};
use crate::tree::TreeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestMode {
    TrainingSet,
    CrossValidation { folds: usize, seed: u64 },
}

/// Run context printed in the report header.
#[derive(Debug, Clone, PartialEq)]
pub struct RunInfo {
    pub relation: String,
    pub attributes: Vec<String>,
    pub instances: usize,
    pub test_mode: TestMode,
    /// Seconds spent building the full-data model; omitted when `None`.
    pub build_seconds: Option<f64>,
}

fn push_row(out: &mut String, label: &str, value: String, suffix: &str) {
    let _ = writeln!(out, "{label:<32}{value:>10}{suffix}");
}

fn metric_cells(m: &ClassMetrics) -> String {
    let roc = m.roc_area.map_or("?".to_string(), |r| num(r, 3));
    format!(
        "{:<9}{:<9}{:<11}{:<9}{:<11}{:<10}",
        num(m.tp_rate, 3),
        num(m.fp_rate, 3),
        num(m.precision, 3),
        num(m.recall, 3),
        num(m.f_measure, 3),
        roc
    )
}

fn detailed_accuracy(out: &mut String, table: &ClassTable, classes: &[String]) {
    out.push_str("=== Detailed Accuracy By Class ===\n\n");
    let _ = writeln!(
        out,
        "{:<17}{:<9}{:<9}{:<11}{:<9}{:<11}{:<10}Class",
        "", "TP Rate", "FP Rate", "Precision", "Recall", "F-Measure", "ROC Area"
    );
    for (row, name) in table.rows.iter().zip(classes) {
        let _ = writeln!(out, "{:<17}{}{name}", "", metric_cells(row));
    }
    let _ = writeln!(out, "{:<17}{}", "Weighted Avg.", metric_cells(&table.weighted).trim_end());
}

fn confusion_block(out: &mut String, ev: &Evaluation) {
    out.push_str("=== Confusion Matrix ===\n\n");
    let counts = ev.confusion.counts();
    let tags: Vec<String> = (0..counts.len()).map(class_tag).collect();
    let width =
        counts.iter().flatten().map(|c| num(*c, 0).len()).chain(tags.iter().map(String::len)).max().unwrap_or(1) + 1;
    for t in &tags {
        let _ = write!(out, "{t:>width$}");
    }
    out.push_str("   <-- classified as\n");
    for (row, (tag, name)) in counts.iter().zip(tags.iter().zip(&ev.class_names)) {
        for c in row {
            let _ = write!(out, "{:>width$}", num(*c, 0));
        }
        let _ = writeln!(out, " | {tag:>width$} = {name}");
    }
}

fn summary_block(out: &mut String, s: &Summary) {
    out.push_str("=== Summary ===\n\n");
    push_row(
        out,
        "Correctly Classified Instances",
        num(s.correct, 4),
        &format!("{:>18} %", num(100.0 * s.accuracy, 4)),
    );
    push_row(
        out,
        "Incorrectly Classified Instances",
        num(s.incorrect, 4),
        &format!("{:>18} %", num(100.0 * (1.0 - s.accuracy), 4)),
    );
    push_row(out, "Kappa statistic", num(s.kappa, 4), "");
    push_row(out, "Mean absolute error", num(s.mae, 4), "");
    push_row(out, "Root mean squared error", num(s.rmse, 4), "");
    push_row(out, "Relative absolute error", num(100.0 * s.rae, 4), " %");
    push_row(out, "Root relative squared error", num(100.0 * s.rrse, 4), " %");
    push_row(out, "Total Number of Instances", num(s.total, 4), "");
    out.push('\n');
}

/// Full classifier report: run information, the tree, the evaluation
/// summary, per-class accuracy and the confusion matrix.
pub fn format_report(ev: &Evaluation, tree_text: &str, params: &TreeParams, info: &RunInfo) -> Result<String> {
    let summary = ev.summary()?;
    let table = ev.per_class_metrics()?;
    let mut out = String::from("=== Run information ===\n\n");
    let _ = writeln!(out, "Scheme:       c4.5 {}", params.options());
    let _ = writeln!(out, "Relation:     {}", info.relation);
    let _ = writeln!(out, "Instances:    {}", info.instances);
    let _ = writeln!(out, "Attributes:   {}", info.attributes.len());
    for a in &info.attributes {
        let _ = writeln!(out, "              {a}");
    }
    let (mode, heading) = match info.test_mode {
        TestMode::TrainingSet => ("evaluate on training data".to_string(), "=== Evaluation on training set ==="),
        TestMode::CrossValidation { folds, seed } => {
            (format!("{folds}-fold cross-validation (seed {seed})"), "=== Stratified cross-validation ===")
        }
    };
    let _ = writeln!(out, "Test mode:    {mode}\n");
    out.push_str("=== Classifier model (full training set) ===\n\n");
    out.push_str(if params.pruning_enabled { "C4.5 pruned tree\n" } else { "C4.5 unpruned tree\n" });
    out.push_str("------------------\n\n");
    out.push_str(tree_text);
    out.push('\n');
    if let Some(secs) = info.build_seconds {
        let _ = writeln!(out, "Time taken to build model: {secs:.2} seconds\n");
    }
    let _ = writeln!(out, "{heading}");
    summary_block(&mut out, &summary);
    detailed_accuracy(&mut out, &table, &ev.class_names);
    out.push('\n');
    confusion_block(&mut out, ev);
    Ok(out)
}

/// Machine-readable `key=value` lines for the summary and weighted metrics.
pub fn summary_key_values(ev: &Evaluation) -> Result<String> {
    let s = ev.summary()?;
    let t = ev.per_class_metrics()?;
    let mut out = String::new();
    for (k, v) in [
        ("correct", s.correct),
        ("incorrect", s.incorrect),
        ("total", s.total),
        ("accuracy", s.accuracy),
        ("kappa", s.kappa),
        ("mae", s.mae),
        ("rmse", s.rmse),
        ("rae", s.rae),
        ("rrse", s.rrse),
        ("weighted_tp_rate", t.weighted.tp_rate),
        ("weighted_fp_rate", t.weighted.fp_rate),
        ("weighted_precision", t.weighted.precision),
        ("weighted_f_measure", t.weighted.f_measure),
    ] {
        let _ = writeln!(out, "{k}={v}");
    }
    if let Some(roc) = t.weighted.roc_area {
        let _ = writeln!(out, "weighted_roc_area={roc}");
    }
    Ok(out)
}
