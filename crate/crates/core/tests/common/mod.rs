#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use titanic_dm::csv::{parse_csv, write_csv, RawTable};
use titanic_dm::dataset::{AttributeSpec, CellValue, Dataset};
use titanic_dm::tree::{build_tree, TreeNode, TreeParams};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn kaggle_csv() -> String {
    std::fs::read_to_string(fixture("titanic_train.csv")).expect("fixture present")
}

/// The five-attribute nominal Titanic table, target unset.
pub fn titanic() -> Dataset {
    let raw = parse_csv(&kaggle_csv()).unwrap();
    let mut d = titanic_dm::prep::normalize_titanic(&raw, "train4").unwrap();
    d.set_target(None).unwrap();
    d
}

pub fn titanic_with_target() -> Dataset {
    let mut d = titanic();
    d.set_target(Some(0)).unwrap();
    d
}

// ---------------------------------------------------------------- entropy

/// Entropy straight from counts, written out term by term.
pub fn hand_entropy(counts: &[u32]) -> f64 {
    let n: u32 = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / n as f64;
            h -= p * p.ln() / std::f64::consts::LN_2;
        }
    }
    h
}

/// Information gain and gain ratio of a split given as `[branch][class]` counts.
pub fn hand_gain(branches: &[Vec<u32>]) -> (f64, f64) {
    let classes = branches[0].len();
    let parent: Vec<u32> = (0..classes).map(|c| branches.iter().map(|b| b[c]).sum()).collect();
    let n: u32 = parent.iter().sum();
    let mut remainder = 0.0;
    let mut sizes = Vec::new();
    for b in branches {
        let s: u32 = b.iter().sum();
        sizes.push(s);
        remainder += s as f64 / n as f64 * hand_entropy(b);
    }
    let gain = hand_entropy(&parent) - remainder;
    let split = hand_entropy(&sizes);
    (gain, if split > 0.0 { gain / split } else { 0.0 })
}

// ------------------------------------------------------------------ AUC

/// Area under the ROC curve by comparing every positive with every negative.
pub fn pair_count_auc(scores: &[f64], positives: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &pi) in positives.iter().enumerate() {
        if !pi {
            continue;
        }
        for (j, &pj) in positives.iter().enumerate() {
            if pj {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

pub fn auc_case() -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
    (2usize..40)
        .prop_flat_map(|n| (prop::collection::vec(0u8..8, n), prop::collection::vec(any::<bool>(), n)))
        .prop_filter("both classes present", |(_, p)| p.iter().any(|&b| b) && p.iter().any(|&b| !b))
        .prop_map(|(s, p)| (s.into_iter().map(f64::from).collect(), p))
}

// ------------------------------------------------------ brute-force C4.5

/// Tree shape produced by the reference grower.
#[derive(Debug, Clone, PartialEq)]
pub enum RefTree {
    Leaf { class: usize, counts: Vec<u32> },
    Split { attr: usize, children: Vec<RefTree> },
}

pub struct TinyTable {
    /// Values per predictor, then the class.
    pub cards: Vec<usize>,
    pub rows: Vec<Vec<usize>>,
}

impl TinyTable {
    pub fn classes(&self) -> usize {
        *self.cards.last().unwrap()
    }

    pub fn predictors(&self) -> usize {
        self.cards.len() - 1
    }

    pub fn to_dataset(&self) -> Dataset {
        let attrs = self
            .cards
            .iter()
            .enumerate()
            .map(|(i, &n)| AttributeSpec::nominal(format!("a{i}"), (0..n).map(|v| format!("v{v}"))).unwrap())
            .collect();
        let rows = self.rows.iter().map(|r| r.iter().map(|&v| CellValue::Nominal(v)).collect()).collect();
        let mut d = Dataset::with_instances("tiny", attrs, rows).unwrap();
        d.set_target(Some(self.cards.len() - 1)).unwrap();
        d
    }
}

impl std::fmt::Debug for TinyTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cards {:?} rows {:?}", self.cards, self.rows)
    }
}

pub fn tiny_table() -> impl Strategy<Value = TinyTable> {
    (prop::collection::vec(2usize..=3, 1..=3), 2usize..=3, 1usize..=12).prop_flat_map(|(pred, classes, n)| {
        let mut cards = pred;
        cards.push(classes);
        let row = cards.iter().map(|&c| 0..c).collect::<Vec<_>>();
        prop::collection::vec(row, n).prop_map(move |rows| TinyTable { cards: cards.clone(), rows })
    })
}

fn first_max(counts: &[u32]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Grows the unpruned tree by enumerating every unused attribute at every node.
pub fn reference_tree(t: &TinyTable, min: u32) -> RefTree {
    let rows: Vec<&Vec<usize>> = t.rows.iter().collect();
    let mut used = vec![false; t.predictors()];
    grow_ref(t, &rows, min, &mut used, 0)
}

fn grow_ref(t: &TinyTable, rows: &[&Vec<usize>], min: u32, used: &mut [bool], parent_class: usize) -> RefTree {
    let k = t.predictors();
    let mut counts = vec![0u32; t.classes()];
    for r in rows {
        counts[r[k]] += 1;
    }
    let n = rows.len() as u32;
    let class = if n == 0 { parent_class } else { first_max(&counts) };
    if n == 0 || counts[class] == n || n < 2 * min {
        return RefTree::Leaf { class, counts };
    }

    let mut candidates: Vec<(usize, f64, f64)> = Vec::new();
    for a in (0..k).filter(|&a| !used[a]) {
        let mut branches = vec![vec![0u32; t.classes()]; t.cards[a]];
        for r in rows {
            branches[r[a]][r[k]] += 1;
        }
        let large = branches.iter().filter(|b| b.iter().sum::<u32>() >= min).count();
        if large < 2 {
            continue;
        }
        let (gain, ratio) = hand_gain(&branches);
        if gain > 1e-10 {
            candidates.push((a, gain, ratio));
        }
    }
    if candidates.is_empty() {
        return RefTree::Leaf { class, counts };
    }
    let mean = candidates.iter().map(|c| c.1).sum::<f64>() / candidates.len() as f64;
    let mut best: Option<(usize, f64)> = None;
    for &(a, gain, ratio) in &candidates {
        if gain >= mean - 1e-12 && best.is_none_or(|(_, r)| ratio > r + 1e-12) {
            best = Some((a, ratio));
        }
    }
    let attr = best.unwrap().0;
    used[attr] = true;
    let children = (0..t.cards[attr])
        .map(|v| {
            let part: Vec<&Vec<usize>> = rows.iter().copied().filter(|r| r[attr] == v).collect();
            grow_ref(t, &part, min, used, class)
        })
        .collect();
    used[attr] = false;
    RefTree::Split { attr, children }
}

pub fn as_ref_tree(node: &TreeNode) -> RefTree {
    match node {
        TreeNode::Leaf(l) => {
            RefTree::Leaf { class: l.class, counts: l.distribution.iter().map(|&w| w as u32).collect() }
        }
        TreeNode::Split { attribute, children, .. } => {
            RefTree::Split { attr: *attribute, children: children.iter().map(as_ref_tree).collect() }
        }
    }
}

pub fn check_tree_matches_reference(t: &TinyTable, min: u32) -> Result<(), TestCaseError> {
    let params = TreeParams { pruning_enabled: false, min_instances: min as f64, ..Default::default() };
    let tree = build_tree(&t.to_dataset(), &params).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(as_ref_tree(&tree.root), reference_tree(t, min));
    Ok(())
}

// ---------------------------------------------------------- ARFF and CSV

fn text_strategy() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-zA-Z0-9 ,{}%'\"\\\\?\t_.é-]{0,6}").unwrap()
}

fn attribute_strategy() -> impl Strategy<Value = AttributeSpec> {
    let nominal = (text_strategy(), prop::collection::btree_set(text_strategy(), 1..5))
        .prop_map(|(name, values)| AttributeSpec::nominal(name, values).unwrap());
    let numeric = text_strategy().prop_map(AttributeSpec::numeric);
    prop_oneof![3 => nominal, 1 => numeric]
}

fn cell_strategy(a: &AttributeSpec) -> BoxedStrategy<CellValue> {
    match a.values() {
        Some(v) => prop_oneof![4 => (0..v.len()).prop_map(CellValue::Nominal), 1 => Just(CellValue::Missing)].boxed(),
        None => prop_oneof![
            4 => prop::num::f64::NORMAL.prop_map(CellValue::Numeric),
            1 => (-1000i32..1000).prop_map(|i| CellValue::Numeric(f64::from(i) / 8.0)),
            1 => Just(CellValue::Missing),
        ]
        .boxed(),
    }
}

pub fn dataset_strategy() -> impl Strategy<Value = Dataset> {
    (text_strategy(), prop::collection::vec(attribute_strategy(), 1..5), 0usize..8).prop_flat_map(
        |(relation, attrs, n)| {
            let row: Vec<BoxedStrategy<CellValue>> = attrs.iter().map(cell_strategy).collect();
            prop::collection::vec(row, n)
                .prop_map(move |rows| Dataset::with_instances(relation.clone(), attrs.clone(), rows).unwrap())
        },
    )
}

pub fn check_arff_round_trip(d: &Dataset) -> Result<(), TestCaseError> {
    let text = titanic_dm::arff::write_arff(d);
    let back = titanic_dm::arff::parse_arff(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&back, d, "{}", text);
    Ok(())
}

pub fn raw_table_strategy() -> impl Strategy<Value = RawTable> {
    let cell = || proptest::string::string_regex("[a-z ,\"\r\n]{0,5}").unwrap();
    (1usize..4, 0usize..6).prop_flat_map(move |(w, n)| {
        (prop::collection::vec(cell(), w), prop::collection::vec(prop::collection::vec(cell(), w), n))
            .prop_map(|(header, rows)| RawTable { header, rows })
    })
}

pub fn check_csv_round_trip(t: &RawTable) -> Result<(), TestCaseError> {
    let text = write_csv(t);
    let back = parse_csv(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text:?}")))?;
    prop_assert_eq!(&back, t, "{:?}", text);
    Ok(())
}
