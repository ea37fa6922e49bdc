//! C4.5 decision trees over nominal attributes.
//!
//! Splits are multiway (one child per declared value) and chosen by gain
//! ratio among the attributes whose information gain is at least the mean
//! positive gain. After growing, subtrees are replaced by leaves bottom-up
//! whenever the pessimistic error estimate of the leaf does not exceed that
//! of the subtree by more than [`prune::PRUNE_SLACK`].

mod print;
pub mod prune;
pub mod split;

pub use print::print_tree;
pub use prune::{estimated_errors, upper_error_estimate};
pub use split::{entropy, gain_and_ratio, SplitStats, WeightedRow};

use crate::dataset::{argmax_first, AttributeKind, AttributeSpec, CellValue, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TreeParams {
    pub confidence_factor: f64,
    pub min_instances: f64,
    pub pruning_enabled: bool,
    pub subtree_raising: bool,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { confidence_factor: 0.25, min_instances: 2.0, pruning_enabled: true, subtree_raising: false }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<()> {
        prune::check_confidence(self.confidence_factor)?;
        if self.min_instances.is_nan() || self.min_instances < 1.0 {
            return Err(Error::usage(format!("minimum instances per leaf must be >= 1, got {}", self.min_instances)));
        }
        Ok(())
    }

    /// Command-line style summary, e.g. `-C 0.25 -M 2`.
    pub fn options(&self) -> String {
        let mut s = if self.pruning_enabled {
            format!("-C {} -M {}", self.confidence_factor, self.min_instances)
        } else {
            format!("-U -M {}", self.min_instances)
        };
        if self.pruning_enabled && self.subtree_raising {
            s.push_str(" -R");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub distribution: Vec<f64>,
    pub class: usize,
}

impl Leaf {
    /// Majority class of `distribution` (lowest index on ties); an empty leaf
    /// takes `fallback`.
    pub(crate) fn from_distribution(distribution: Vec<f64>, fallback: Option<usize>) -> Self {
        let class = if distribution.iter().sum::<f64>() > 0.0 {
            argmax_first(distribution.iter().copied())
        } else {
            fallback.unwrap_or(0)
        };
        Leaf { distribution, class }
    }

    pub fn total_weight(&self) -> f64 {
        self.distribution.iter().sum()
    }

    pub fn error_weight(&self) -> f64 {
        self.total_weight() - self.distribution[self.class]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf(Leaf),
    Split {
        attribute: usize,
        /// Class weights of the training rows reaching this node.
        distribution: Vec<f64>,
        children: Vec<TreeNode>,
    },
}

impl TreeNode {
    pub fn total_weight(&self) -> f64 {
        match self {
            TreeNode::Leaf(l) => l.total_weight(),
            TreeNode::Split { distribution, .. } => distribution.iter().sum(),
        }
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 1,
            TreeNode::Split { children, .. } => children.iter().map(TreeNode::num_leaves).sum(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 1,
            TreeNode::Split { children, .. } => 1 + children.iter().map(TreeNode::size).sum::<usize>(),
        }
    }

    pub fn leaves(&self) -> Vec<&Leaf> {
        match self {
            TreeNode::Leaf(l) => vec![l],
            TreeNode::Split { children, .. } => children.iter().flat_map(TreeNode::leaves).collect(),
        }
    }
}

/// A fitted tree together with the schema it was trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub attributes: Vec<AttributeSpec>,
    pub target: usize,
}

impl DecisionTree {
    pub fn class_values(&self) -> &[String] {
        self.attributes[self.target].values().expect("nominal target")
    }

    pub fn num_leaves(&self) -> usize {
        self.root.num_leaves()
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }

    /// Predicted class and class-probability vector for one instance.
    ///
    /// A missing value at a split follows the child with the most training
    /// weight. Reaching an empty leaf yields the parent's class frequencies.
    pub fn predict(&self, instance: &[CellValue]) -> (usize, Vec<f64>) {
        let mut node = &self.root;
        let mut parent_dist: Option<&[f64]> = None;
        loop {
            match node {
                TreeNode::Leaf(leaf) => {
                    let dist = match parent_dist {
                        Some(p) if leaf.total_weight() <= 0.0 => p,
                        _ => &leaf.distribution,
                    };
                    return (leaf.class, normalize(dist));
                }
                TreeNode::Split { attribute, distribution, children } => {
                    let branch = match instance[*attribute] {
                        CellValue::Nominal(v) if v < children.len() => v,
                        _ => prune::heaviest_child(children),
                    };
                    parent_dist = Some(distribution);
                    node = &children[branch];
                }
            }
        }
    }
}

fn normalize(dist: &[f64]) -> Vec<f64> {
    let total: f64 = dist.iter().sum();
    if total > 0.0 {
        dist.iter().map(|w| w / total).collect()
    } else {
        vec![1.0 / dist.len() as f64; dist.len()]
    }
}

/// Gains at or below this are treated as zero.
const MIN_GAIN: f64 = 1e-10;
/// Gains or ratios closer than this compare equal, so values that differ only
/// by summation order still tie and the lower attribute index wins.
const TIE_TOLERANCE: f64 = 1e-12;

struct Grower<'a> {
    data: &'a Dataset,
    target: usize,
    params: &'a TreeParams,
}

impl Grower<'_> {
    fn grow(&self, rows: &[WeightedRow], available: &mut [bool], parent_majority: usize) -> TreeNode {
        let dist = split::class_distribution(self.data, rows, self.target);
        let total: f64 = dist.iter().sum();
        let leaf = Leaf::from_distribution(dist, Some(parent_majority));
        if total <= 0.0 || leaf.distribution[leaf.class] >= total || total < 2.0 * self.params.min_instances {
            return TreeNode::Leaf(leaf);
        }
        let Some(attr) = self.choose_split(rows, available) else {
            return TreeNode::Leaf(leaf);
        };

        let n_values = self.data.attribute(attr).num_values();
        let mut parts: Vec<Vec<WeightedRow>> = vec![Vec::new(); n_values];
        let mut missing = Vec::new();
        for &(r, w) in rows {
            match self.data.instances()[r][attr] {
                CellValue::Nominal(v) => parts[v].push((r, w)),
                _ => missing.push((r, w)),
            }
        }
        if !missing.is_empty() {
            let heaviest = argmax_first(parts.iter().map(|p| p.iter().map(|&(_, w)| w).sum::<f64>()));
            parts[heaviest].extend(missing);
        }

        available[attr] = false;
        let children = parts.iter().map(|p| self.grow(p, available, leaf.class)).collect();
        available[attr] = true;
        TreeNode::Split { attribute: attr, distribution: leaf.distribution, children }
    }

    fn choose_split(&self, rows: &[WeightedRow], available: &[bool]) -> Option<usize> {
        let min = self.params.min_instances;
        let mut candidates = Vec::new();
        for attr in (0..available.len()).filter(|&a| available[a]) {
            let branches = split::branch_distributions(self.data, rows, attr, self.target);
            let big_enough = branches.iter().filter(|b| b.iter().sum::<f64>() >= min).count();
            if big_enough < 2 {
                continue;
            }
            let parent = split::class_distribution(self.data, rows, self.target);
            let stats = split::stats_from_branches(&parent, &branches);
            if stats.info_gain > MIN_GAIN {
                candidates.push((attr, stats));
            }
        }
        if candidates.is_empty() {
            return None;
        }
        let mean = candidates.iter().map(|(_, s)| s.info_gain).sum::<f64>() / candidates.len() as f64;
        let floor = mean - TIE_TOLERANCE;
        let mut best: Option<(usize, f64)> = None;
        for &(attr, s) in &candidates {
            if s.info_gain < floor {
                continue;
            }
            if best.is_none_or(|(_, r)| s.gain_ratio > r + TIE_TOLERANCE) {
                best = Some((attr, s.gain_ratio));
            }
        }
        best.map(|(a, _)| a)
    }
}

/// Grows (and, unless disabled, prunes) a tree predicting `d`'s target.
///
/// Every attribute other than the target must be nominal. Rows with a missing
/// target value are ignored.
pub fn build_tree(d: &Dataset, params: &TreeParams) -> Result<DecisionTree> {
    params.validate()?;
    let target = d.target().ok_or_else(|| Error::usage("dataset has no target attribute"))?;
    for (i, a) in d.attributes().iter().enumerate() {
        if i != target && matches!(a.kind, AttributeKind::Numeric) {
            return Err(Error::usage(format!(
                "attribute {} is numeric; only nominal predictors are supported",
                a.name
            )));
        }
    }
    let rows: Vec<WeightedRow> =
        d.instances().iter().enumerate().filter(|(_, r)| !r[target].is_missing()).map(|(i, _)| (i, 1.0)).collect();
    if rows.is_empty() {
        return Err(Error::usage("cannot build a tree from an empty dataset"));
    }

    let grower = Grower { data: d, target, params };
    let mut available: Vec<bool> = (0..d.num_attributes()).map(|i| i != target).collect();
    let mut root = grower.grow(&rows, &mut available, 0);
    if params.pruning_enabled {
        let pruner = prune::Pruner { data: d, target, cf: params.confidence_factor, raise: params.subtree_raising };
        root = pruner.prune(root, &rows);
    }
    Ok(DecisionTree { root, attributes: d.attributes().to_vec(), target })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(names: &[&str], rows: &[&[usize]]) -> Dataset {
        let attrs = names.iter().map(|n| AttributeSpec::nominal(*n, ["a", "b"]).unwrap()).collect();
        let rows = rows.iter().map(|r| r.iter().map(|&v| CellValue::Nominal(v)).collect()).collect();
        let mut d = Dataset::with_instances("t", attrs, rows).unwrap();
        d.set_target(Some(names.len() - 1)).unwrap();
        d
    }

    #[test]
    fn single_class_gives_single_leaf() {
        let d = table(&["x", "y"], &[&[0, 1], &[1, 1], &[0, 1]]);
        let t = build_tree(&d, &TreeParams::default()).unwrap();
        let TreeNode::Leaf(l) = &t.root else { panic!("expected leaf") };
        assert_eq!(l.class, 1);
        assert_eq!(l.error_weight(), 0.0);
        assert_eq!(l.total_weight(), 3.0);
    }

    #[test]
    fn copies_of_target_split_perfectly() {
        let rows: Vec<&[usize]> = vec![&[0, 1, 0], &[1, 0, 1], &[0, 0, 0], &[1, 1, 1], &[0, 1, 0], &[1, 0, 1]];
        let d = table(&["noise", "x", "y"], &rows);
        let t = build_tree(&d, &TreeParams { pruning_enabled: false, ..Default::default() }).unwrap();
        let TreeNode::Split { attribute, .. } = &t.root else { panic!() };
        assert_eq!(*attribute, 0);
        for r in d.instances() {
            assert_eq!(t.predict(r).0, r[2].nominal().unwrap());
        }
    }

    #[test]
    fn too_few_instances_stay_a_leaf() {
        let d = table(&["x", "y"], &[&[0, 0], &[1, 1], &[0, 0]]);
        let t = build_tree(&d, &TreeParams::default()).unwrap();
        assert_eq!(t.size(), 1);
    }

    #[test]
    fn numeric_predictor_rejected() {
        let mut d = Dataset::with_instances(
            "t",
            vec![AttributeSpec::numeric("n"), AttributeSpec::nominal("c", ["a"]).unwrap()],
            vec![vec![CellValue::Numeric(1.0), CellValue::Nominal(0)]],
        )
        .unwrap();
        d.set_target(Some(1)).unwrap();
        assert_eq!(build_tree(&d, &TreeParams::default()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn empty_dataset_rejected() {
        let d = table(&["x", "y"], &[]);
        assert_eq!(build_tree(&d, &TreeParams::default()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn missing_target_is_usage_error() {
        let mut d = table(&["x", "y"], &[&[0, 0]]);
        d.set_target(None).unwrap();
        assert!(build_tree(&d, &TreeParams::default()).is_err());
    }

    #[test]
    fn bad_params_rejected() {
        let d = table(&["x", "y"], &[&[0, 0]]);
        assert!(build_tree(&d, &TreeParams { confidence_factor: 0.7, ..Default::default() }).is_err());
        assert!(build_tree(&d, &TreeParams { min_instances: 0.5, ..Default::default() }).is_err());
    }

    #[test]
    fn missing_split_value_follows_heaviest_branch() {
        let rows: Vec<&[usize]> = vec![&[0, 0], &[0, 0], &[0, 0], &[1, 1], &[1, 1]];
        let d = table(&["x", "y"], &rows);
        let t = build_tree(&d, &TreeParams { pruning_enabled: false, ..Default::default() }).unwrap();
        assert_eq!(t.size(), 3);
        let (class, dist) = t.predict(&[CellValue::Missing, CellValue::Missing]);
        assert_eq!(class, 0);
        assert_eq!(dist, vec![1.0, 0.0]);
    }

    #[test]
    fn params_summary() {
        assert_eq!(TreeParams::default().options(), "-C 0.25 -M 2");
        assert_eq!(TreeParams { pruning_enabled: false, ..Default::default() }.options(), "-U -M 2");
    }
}
