use std::fmt::Write;

use super::{DecisionTree, Leaf, TreeNode};

fn leaf_label(tree: &DecisionTree, leaf: &Leaf) -> String {
    let class = &tree.class_values()[leaf.class];
    let errors = leaf.error_weight();
    if errors > 0.0 {
        format!(": {class} ({:.1}/{errors:.1})", leaf.total_weight())
    } else {
        format!(": {class} ({:.1})", leaf.total_weight())
    }
}

fn write_node(out: &mut String, tree: &DecisionTree, node: &TreeNode, depth: usize) {
    let TreeNode::Split { attribute, children, .. } = node else { return };
    let attr = &tree.attributes[*attribute];
    let values = attr.values().expect("split on nominal attribute");
    for (value, child) in values.iter().zip(children) {
        out.push_str(&"|   ".repeat(depth));
        let _ = write!(out, "{} = {value}", attr.name);
        match child {
            TreeNode::Leaf(leaf) => {
                out.push_str(&leaf_label(tree, leaf));
                out.push('\n');
            }
            TreeNode::Split { .. } => {
                out.push('\n');
                write_node(out, tree, child, depth + 1);
            }
        }
    }
}

/// Renders the tree in the indented `attr = value: class (weight/errors)`
/// layout, followed by the leaf count and tree size.
pub fn print_tree(tree: &DecisionTree) -> String {
    let mut out = String::new();
    match &tree.root {
        TreeNode::Leaf(leaf) => {
            out.push_str(&leaf_label(tree, leaf));
            out.push('\n');
        }
        root => write_node(&mut out, tree, root, 0),
    }
    let _ = write!(out, "\nNumber of Leaves  : \t{}\n\nSize of the tree : \t{}\n", tree.num_leaves(), tree.size());
    out
}
