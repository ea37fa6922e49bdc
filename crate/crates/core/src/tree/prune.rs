//! Error-based (pessimistic) pruning.

use statrs::distribution::{ContinuousCDF, Normal};

use super::split::WeightedRow;
use super::{Leaf, TreeNode};
use crate::dataset::{argmax_first, CellValue, Dataset};
use crate::error::{Error, Result};

/// Slack applied when comparing a collapsed leaf against its subtree.
pub const PRUNE_SLACK: f64 = 0.1;

pub fn check_confidence(cf: f64) -> Result<()> {
    if cf > 0.0 && cf <= 0.5 {
        Ok(())
    } else {
        Err(Error::usage(format!("confidence factor {cf} must lie in (0, 0.5]")))
    }
}

/// Additional errors `U` such that `(errors + U) / weight` is the upper
/// `cf`-confidence bound on the binomial error rate of a leaf holding
/// `weight` instances of which `errors` are misclassified.
pub fn upper_error_estimate(weight: f64, errors: f64, cf: f64) -> Result<f64> {
    check_confidence(cf)?;
    if weight.is_nan() || weight <= 0.0 || errors < 0.0 || errors > weight {
        return Err(Error::usage(format!("invalid leaf counts: weight {weight}, errors {errors}")));
    }
    Ok(added_errors(weight, errors, cf))
}

fn added_errors(n: f64, e: f64, cf: f64) -> f64 {
    if e < 1.0 {
        let base = n * (1.0 - cf.powf(1.0 / n));
        if e == 0.0 {
            return base;
        }
        return base + e * (added_errors(n, 1.0, cf) - base);
    }
    if e + 0.5 >= n {
        return (n - e).max(0.0);
    }
    let z = Normal::standard().inverse_cdf(1.0 - cf);
    let f = (e + 0.5) / n;
    let z2 = z * z;
    let r = (f + z2 / (2.0 * n) + z * (f / n - f * f / n + z2 / (4.0 * n * n)).sqrt()) / (1.0 + z2 / n);
    r * n - e
}

/// Observed plus pessimistic errors of a single leaf.
pub(crate) fn leaf_estimate(dist: &[f64], cf: f64) -> f64 {
    let n: f64 = dist.iter().sum();
    if n <= 0.0 {
        return 0.0;
    }
    let e = n - dist[argmax_first(dist.iter().copied())];
    e + added_errors(n, e, cf)
}

/// Sum of leaf estimates over a subtree.
pub fn estimated_errors(node: &TreeNode, cf: f64) -> f64 {
    match node {
        TreeNode::Leaf(l) => leaf_estimate(&l.distribution, cf),
        TreeNode::Split { children, .. } => children.iter().map(|c| estimated_errors(c, cf)).sum(),
    }
}

pub(crate) struct Pruner<'a> {
    pub data: &'a Dataset,
    pub target: usize,
    pub cf: f64,
    pub raise: bool,
}

impl Pruner<'_> {
    /// Routes rows to the children of a split on `attr`. Missing values follow
    /// the heaviest child (by `fallback`).
    fn route(&self, attr: usize, n_children: usize, fallback: usize, rows: &[WeightedRow]) -> Vec<Vec<WeightedRow>> {
        let mut parts = vec![Vec::new(); n_children];
        for &(r, w) in rows {
            let v = match self.data.instances()[r][attr] {
                CellValue::Nominal(v) => v,
                _ => fallback,
            };
            parts[v].push((r, w));
        }
        parts
    }

    pub fn prune(&self, node: TreeNode, rows: &[WeightedRow]) -> TreeNode {
        let TreeNode::Split { attribute, distribution, children } = node else {
            return node;
        };
        let heaviest = heaviest_child(&children);
        let parts = self.route(attribute, children.len(), heaviest, rows);
        let children: Vec<TreeNode> = children.into_iter().zip(&parts).map(|(c, p)| self.prune(c, p)).collect();

        let leaf_err = leaf_estimate(&distribution, self.cf);
        let tree_err: f64 = children.iter().map(|c| estimated_errors(c, self.cf)).sum();
        let raised = self.raise.then(|| {
            let majority = argmax_first(distribution.iter().copied());
            let lifted = self.redistribute(&children[heaviest], rows, majority);
            let err = estimated_errors(&lifted, self.cf);
            (lifted, err)
        });
        let raise_err = raised.as_ref().map_or(f64::INFINITY, |(_, e)| *e);

        if leaf_err <= tree_err + PRUNE_SLACK && leaf_err <= raise_err + PRUNE_SLACK {
            return TreeNode::Leaf(Leaf::from_distribution(distribution, None));
        }
        if let Some((lifted, err)) = raised {
            if err <= tree_err + PRUNE_SLACK {
                return self.prune(lifted, rows);
            }
        }
        TreeNode::Split { attribute, distribution, children }
    }

    /// Rebuilds every distribution of `node` from `rows`, keeping its shape.
    fn redistribute(&self, node: &TreeNode, rows: &[WeightedRow], parent_majority: usize) -> TreeNode {
        let dist = super::split::class_distribution(self.data, rows, self.target);
        match node {
            TreeNode::Leaf(_) => TreeNode::Leaf(Leaf::from_distribution(dist, Some(parent_majority))),
            TreeNode::Split { attribute, children, .. } => {
                let parts = self.route(*attribute, children.len(), heaviest_child(children), rows);
                let majority =
                    if dist.iter().sum::<f64>() > 0.0 { argmax_first(dist.iter().copied()) } else { parent_majority };
                let children = children.iter().zip(&parts).map(|(c, p)| self.redistribute(c, p, majority)).collect();
                TreeNode::Split { attribute: *attribute, distribution: dist, children }
            }
        }
    }
}

pub(crate) fn heaviest_child(children: &[TreeNode]) -> usize {
    argmax_first(children.iter().map(TreeNode::total_weight))
}
