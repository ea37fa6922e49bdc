//! Browser bindings for the Titanic toolkit. Each exported function takes the
//! ARFF text of a dataset and returns text (a report or an SVG document).

use titanic_dm::arff::parse_arff;
use titanic_dm::cluster::{format_cluster_report, kmeans, ClusterParams};
use titanic_dm::eval::{cross_validate, evaluate_on_training, format_report, RunInfo, TestMode};
use titanic_dm::plot::{jitter_scatter, ColorBy, PlotSpec};
use titanic_dm::tree::{build_tree, print_tree, TreeParams};
use titanic_dm::Dataset;
use wasm_bindgen::prelude::*;

/// Pseudo attribute name that colors points by k-means cluster.
pub const CLUSTER_COLOR: &str = "(cluster)";

fn load(arff: &str) -> Result<Dataset, String> {
    parse_arff(arff).map_err(|e| e.to_string())
}

/// Attribute names, one per line.
pub fn attribute_names(arff: &str) -> Result<String, String> {
    let d = load(arff)?;
    Ok(d.attributes().iter().map(|a| a.name.as_str()).collect::<Vec<_>>().join("\n"))
}

/// Tree plus evaluation report. `folds == 0` evaluates on the training data.
pub fn tree_report(
    arff: &str,
    class: &str,
    cf: f64,
    min_leaf: f64,
    prune: bool,
    folds: usize,
    seed: u64,
) -> Result<String, String> {
    let mut d = load(arff)?;
    let target = d.find_attribute(class).map_err(|e| e.to_string())?;
    d.set_target(Some(target)).map_err(|e| e.to_string())?;
    let params =
        TreeParams { confidence_factor: cf, min_instances: min_leaf, pruning_enabled: prune, ..Default::default() };
    let tree = build_tree(&d, &params).map_err(|e| e.to_string())?;
    let (ev, test_mode) = if folds == 0 {
        (evaluate_on_training(&d, &params).map_err(|e| e.to_string())?.1, TestMode::TrainingSet)
    } else {
        (
            cross_validate(&d, &params, folds, seed).map_err(|e| e.to_string())?,
            TestMode::CrossValidation { folds, seed },
        )
    };
    let info = RunInfo {
        relation: d.relation.clone(),
        attributes: d.attributes().iter().map(|a| a.name.clone()).collect(),
        instances: d.len(),
        test_mode,
        build_seconds: None,
    };
    format_report(&ev, &print_tree(&tree), &params, &info).map_err(|e| e.to_string())
}

pub fn cluster_report(arff: &str, k: usize, seed: u64) -> Result<String, String> {
    let d = load(arff)?;
    let p = ClusterParams { k, seed, max_iterations: 500 };
    let m = kmeans(&d, &p).map_err(|e| e.to_string())?;
    format_cluster_report(&m, &d, &p).map_err(|e| e.to_string())
}

/// Jittered scatter of `x` against `y`, colored by an attribute or, when
/// `color` is [`CLUSTER_COLOR`], by a k-means run with `k` and `cluster_seed`.
pub fn scatter_svg(
    arff: &str,
    x: &str,
    y: &str,
    color: &str,
    k: usize,
    cluster_seed: u64,
    jitter_seed: u64,
) -> Result<String, String> {
    let d = load(arff)?;
    let find = |name: &str| d.find_attribute(name).map_err(|e| e.to_string());
    let color_by = if color == CLUSTER_COLOR {
        let m = kmeans(&d, &ClusterParams { k, seed: cluster_seed, max_iterations: 500 }).map_err(|e| e.to_string())?;
        ColorBy::Clusters(m.assignment)
    } else {
        ColorBy::Attribute(find(color)?)
    };
    let spec = PlotSpec { jitter_seed, ..PlotSpec::new(find(x)?, find(y)?, color_by) };
    jitter_scatter(&d, &spec).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = attributeNames)]
pub fn attribute_names_js(arff: &str) -> Result<String, JsValue> {
    attribute_names(arff).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = treeReport)]
pub fn tree_report_js(
    arff: &str,
    class: &str,
    cf: f64,
    min_leaf: f64,
    prune: bool,
    folds: u32,
    seed: u32,
) -> Result<String, JsValue> {
    tree_report(arff, class, cf, min_leaf, prune, folds as usize, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = clusterReport)]
pub fn cluster_report_js(arff: &str, k: u32, seed: u32) -> Result<String, JsValue> {
    cluster_report(arff, k as usize, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = scatterSvg)]
pub fn scatter_svg_js(
    arff: &str,
    x: &str,
    y: &str,
    color: &str,
    k: u32,
    cluster_seed: u32,
    jitter_seed: u32,
) -> Result<String, JsValue> {
    scatter_svg(arff, x, y, color, k as usize, u64::from(cluster_seed), u64::from(jitter_seed))
        .map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEMO: &str = include_str!("../www/titanic.arff");

    #[test]
    fn names() {
        assert_eq!(attribute_names(DEMO).unwrap(), "Survived\nClass\nSex\nAgeGroup\nEmbarked");
    }

    #[test]
    fn tree_defaults_reproduce_the_known_root() {
        let r = tree_report(DEMO, "Survived", 0.25, 2.0, true, 0, 1).unwrap();
        assert!(r.contains("Sex = male: No (577.0/109.0)"));
        assert!(r.contains("Number of Leaves  : \t11"));
    }

    #[test]
    fn bad_parameters_come_back_as_messages() {
        assert!(tree_report(DEMO, "Survived", 0.9, 2.0, true, 0, 1).unwrap_err().contains("confidence"));
        assert!(tree_report(DEMO, "Fare", 0.25, 2.0, true, 0, 1).is_err());
        assert!(cluster_report("not arff", 2, 1).is_err());
    }

    #[test]
    fn cluster_and_scatter() {
        assert!(cluster_report(DEMO, 2, 1).unwrap().contains("Within cluster sum of squared errors: 1185.0"));
        let svg = scatter_svg(DEMO, "Sex", "Survived", CLUSTER_COLOR, 2, 1, 7).unwrap();
        assert_eq!(svg.matches("<circle").count(), 891);
        let by_class = scatter_svg(DEMO, "Embarked", "Survived", "Class", 2, 1, 7).unwrap();
        assert!(by_class.contains(">1st</text>"));
    }
}
