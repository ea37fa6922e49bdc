//! K-means over nominal attributes.
//!
//! Distance is Euclidean over 0/1 per-attribute mismatches, so the squared
//! distance between two instances is the number of attributes on which they
//! differ and a cluster's best representative is its per-attribute mode.

use std::fmt::Write;

use rand::seq::SliceRandom;

use crate::dataset::{argmax_first, column_mode, AttributeKind, CellValue, Dataset};
use crate::error::{Error, Result};
use crate::rng;
use crate::textfmt::num;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterParams {
    pub k: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams { k: 2, seed: 10, max_iterations: 500 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    /// One mode row per cluster.
    pub centroids: Vec<Vec<usize>>,
    pub assignment: Vec<usize>,
    pub sse: f64,
    /// Assignment passes executed; the first pass counts as 1.
    pub iterations: usize,
    /// SSE after every assignment pass.
    pub sse_history: Vec<f64>,
}

impl ClusterModel {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.centroids.len()];
        for &a in &self.assignment {
            sizes[a] += 1;
        }
        sizes
    }
}

/// Replaces every missing cell by its column's mode (nominal) or mean (numeric).
pub fn impute_modes(d: &Dataset) -> Result<Dataset> {
    let mut out = d.clone();
    for attr in 0..d.num_attributes() {
        if !d.instances().iter().any(|r| r[attr].is_missing()) {
            continue;
        }
        let fill = column_mode(d, attr)?;
        for row in out.instances_mut() {
            if row[attr].is_missing() {
                row[attr] = fill;
            }
        }
    }
    Ok(out)
}

fn mismatches(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Euclidean distance with a 0/1 difference per nominal attribute.
pub fn nominal_distance(a: &[CellValue], b: &[CellValue]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::usage(format!("instances have {} and {} attributes", a.len(), b.len())));
    }
    let mut count = 0usize;
    for (x, y) in a.iter().zip(b) {
        match (x, y) {
            (CellValue::Nominal(x), CellValue::Nominal(y)) => count += usize::from(x != y),
            _ => return Err(Error::usage("distance is defined for non-missing nominal cells only")),
        }
    }
    Ok((count as f64).sqrt())
}

fn nominal_rows(d: &Dataset) -> Result<Vec<Vec<usize>>> {
    if let Some(a) = d.attributes().iter().find(|a| matches!(a.kind, AttributeKind::Numeric)) {
        return Err(Error::usage(format!("attribute {} is numeric; clustering supports nominal data only", a.name)));
    }
    d.instances()
        .iter()
        .map(|row| {
            row.iter().map(|c| c.nominal().ok_or_else(|| Error::data("missing value left after imputation"))).collect()
        })
        .collect()
}

fn nearest(row: &[usize], centroids: &[Vec<usize>]) -> (usize, usize) {
    centroids
        .iter()
        .enumerate()
        .map(|(c, cent)| (c, mismatches(row, cent)))
        .min_by_key(|&(c, dist)| (dist, c))
        .expect("at least one centroid")
}

fn modes(rows: &[Vec<usize>], members: impl Iterator<Item = usize> + Clone, cardinalities: &[usize]) -> Vec<usize> {
    cardinalities
        .iter()
        .enumerate()
        .map(|(a, &n)| {
            let mut counts = vec![0usize; n];
            for m in members.clone() {
                counts[rows[m][a]] += 1;
            }
            argmax_first(counts)
        })
        .collect()
}

/// Clusters `d` (after mode imputation) into `p.k` groups.
///
/// Initial centroids are the first `k` distinct value tuples in a seeded
/// shuffle of the instances. Each pass assigns every instance to its nearest
/// centroid (lowest index on ties); the loop stops when a pass leaves all
/// assignments unchanged or after `max_iterations` passes. Otherwise centroids
/// move to their cluster's per-attribute mode (lowest value index on ties),
/// and an emptied cluster is reseeded at the instance farthest from its
/// current centroid.
pub fn kmeans(d: &Dataset, p: &ClusterParams) -> Result<ClusterModel> {
    if p.k == 0 || p.max_iterations == 0 {
        return Err(Error::usage("k and max iterations must be at least 1"));
    }
    if p.k > d.len() {
        return Err(Error::usage(format!("k = {} exceeds the {} instances", p.k, d.len())));
    }
    let data = impute_modes(d)?;
    let rows = nominal_rows(&data)?;
    let cards: Vec<usize> = data.attributes().iter().map(|a| a.num_values()).collect();

    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(&mut rng::seeded(p.seed));
    let mut centroids: Vec<Vec<usize>> = Vec::with_capacity(p.k);
    for &i in &order {
        if !centroids.contains(&rows[i]) {
            centroids.push(rows[i].clone());
            if centroids.len() == p.k {
                break;
            }
        }
    }
    if centroids.len() < p.k {
        return Err(Error::data(format!(
            "cannot pick {} initial centroids: only {} distinct instances",
            p.k,
            centroids.len()
        )));
    }

    let mut assignment: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let pass: Vec<(usize, usize)> = rows.iter().map(|r| nearest(r, &centroids)).collect();
        let sse = pass.iter().map(|&(_, dist)| dist as f64).sum();
        history.push(sse);
        let next: Vec<usize> = pass.iter().map(|&(c, _)| c).collect();
        let converged = next == assignment;
        assignment = next;
        if converged || iterations >= p.max_iterations {
            break;
        }

        for (c, cent) in centroids.iter_mut().enumerate() {
            let members = assignment.iter().enumerate().filter(move |&(_, &a)| a == c).map(|(i, _)| i);
            if members.clone().next().is_some() {
                *cent = modes(&rows, members, &cards);
            }
        }
        reseed_empty(&rows, &assignment, &mut centroids);
    }

    Ok(ClusterModel {
        sse: *history.last().expect("one pass"),
        centroids,
        assignment,
        iterations,
        sse_history: history,
    })
}

fn reseed_empty(rows: &[Vec<usize>], assignment: &[usize], centroids: &mut [Vec<usize>]) {
    let mut sizes = vec![0usize; centroids.len()];
    for &a in assignment {
        sizes[a] += 1;
    }
    let mut taken: Vec<usize> = Vec::new();
    for c in 0..centroids.len() {
        if sizes[c] > 0 {
            continue;
        }
        let far = (0..rows.len())
            .filter(|i| !taken.iter().any(|&t| rows[t] == rows[*i]))
            .max_by_key(|&i| (mismatches(&rows[i], &centroids[assignment[i]]), std::cmp::Reverse(i)));
        if let Some(i) = far {
            taken.push(i);
            centroids[c] = rows[i].clone();
        }
    }
}

/// Sum of squared distances between each instance and its assigned centroid.
pub fn recompute_sse(d: &Dataset, centroids: &[Vec<usize>], assignment: &[usize]) -> Result<f64> {
    let rows = nominal_rows(&impute_modes(d)?)?;
    Ok(rows.iter().zip(assignment).map(|(r, &a)| mismatches(r, &centroids[a]) as f64).sum())
}

/// Weka-like text report of a fitted model.
pub fn format_cluster_report(m: &ClusterModel, d: &Dataset, p: &ClusterParams) -> Result<String> {
    let full: Vec<usize> =
        (0..d.num_attributes()).map(|a| column_mode(d, a).map(|v| v.nominal().unwrap_or(0))).collect::<Result<_>>()?;
    let sizes = m.sizes();

    let mut out = String::from("=== Run information ===\n\n");
    let _ = writeln!(out, "Scheme:       k-means (nominal) -N {} -I {} -S {}", p.k, p.max_iterations, p.seed);
    let _ = writeln!(out, "Relation:     {}", d.relation);
    let _ = writeln!(out, "Instances:    {}", d.len());
    let _ = writeln!(out, "Attributes:   {}", d.num_attributes());
    for a in d.attributes() {
        let _ = writeln!(out, "              {}", a.name);
    }
    out.push_str("Test mode:    evaluate on training data\n\n");
    out.push_str("=== Model and evaluation on training set ===\n\n\nkMeans\n======\n\n");
    let _ = writeln!(out, "Number of iterations: {}", m.iterations);
    let _ = writeln!(out, "Within cluster sum of squared errors: {:.1}", m.sse);
    out.push_str("Missing values globally replaced with mean/mode\n\nCluster centroids:\n");

    let name_w = d.attributes().iter().map(|a| a.name.len()).max().unwrap_or(0).max("Attribute".len()) + 2;
    let value_w = d
        .attributes()
        .iter()
        .filter_map(|a| a.values())
        .flatten()
        .map(String::len)
        .max()
        .unwrap_or(0)
        .max("Full Data".len())
        .max(format!("({})", d.len()).len())
        + 2;
    let _ = writeln!(out, "{:name_w$}{:>w$}", "", "Cluster#", w = value_w * (sizes.len() + 1));
    let _ = write!(out, "{:<name_w$}{:>value_w$}", "Attribute", "Full Data");
    for c in 0..sizes.len() {
        let _ = write!(out, "{c:>value_w$}");
    }
    let _ = write!(out, "\n{:name_w$}{:>value_w$}", "", format!("({})", d.len()));
    for s in &sizes {
        let _ = write!(out, "{:>value_w$}", format!("({s})"));
    }
    let _ = writeln!(out, "\n{}", "=".repeat(name_w + value_w * (sizes.len() + 1)));
    for (a, attr) in d.attributes().iter().enumerate() {
        let values = attr.values().unwrap_or_default();
        let _ = write!(out, "{:<name_w$}{:>value_w$}", attr.name, values[full[a]]);
        for cent in &m.centroids {
            let _ = write!(out, "{:>value_w$}", values[cent[a]]);
        }
        out.push('\n');
    }
    out.push_str("\n\n=== Model and evaluation on training set ===\n\nClustered Instances\n\n");
    let total = d.len().max(1) as f64;
    for (c, s) in sizes.iter().enumerate() {
        let pct = num((100.0 * *s as f64 / total).round(), 0);
        let _ = writeln!(out, "{c}      {s:>5} ({pct:>3}%)");
    }
    Ok(out)
}

/// `instance,cluster` CSV, 0-based instance indices.
pub fn write_assignments(assignment: &[usize]) -> String {
    let mut out = String::from("instance,cluster\n");
    for (i, c) in assignment.iter().enumerate() {
        let _ = writeln!(out, "{i},{c}");
    }
    out
}

/// Parses the output of [`write_assignments`] back into a cluster vector.
pub fn read_assignments(text: &str) -> Result<Vec<usize>> {
    let table = crate::csv::parse_csv(text)?;
    let (ic, cc) = match (table.column("instance"), table.column("cluster")) {
        (Some(i), Some(c)) => (i, c),
        _ => return Err(Error::format("assignment file needs 'instance' and 'cluster' columns")),
    };
    let mut out = vec![None; table.rows.len()];
    for (n, row) in table.rows.iter().enumerate() {
        let line = n + 2;
        let parse = |s: &str| {
            s.trim().parse::<usize>().map_err(|_| Error::data_at(line, format!("line {line}: bad number '{s}'")))
        };
        let i = parse(&row[ic])?;
        let c = parse(&row[cc])?;
        let slot =
            out.get_mut(i).ok_or_else(|| Error::data_at(line, format!("line {line}: instance {i} out of range")))?;
        *slot = Some(c);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::data(format!("no cluster given for instance {i}"))))
        .collect()
}
