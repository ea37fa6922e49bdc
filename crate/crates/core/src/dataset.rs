//! In-memory tabular model shared by every other module.
//!
//! Nominal cells hold an index into their attribute's declared value list, so
//! the declaration order of values is significant: it fixes class indices,
//! tie-breaking, tree print order and legend order downstream.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeKind {
    Nominal(Vec<String>),
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
}

impl AttributeSpec {
    pub fn nominal<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Result<Self> {
        let name = name.into();
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(Error::format(format!("nominal attribute {name} declares no values")));
        }
        for (i, v) in values.iter().enumerate() {
            if values[..i].contains(v) {
                return Err(Error::format(format!("attribute {name} declares value '{v}' twice")));
            }
        }
        Ok(AttributeSpec { name, kind: AttributeKind::Nominal(values) })
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        AttributeSpec { name: name.into(), kind: AttributeKind::Numeric }
    }

    pub fn values(&self) -> Option<&[String]> {
        match &self.kind {
            AttributeKind::Nominal(v) => Some(v),
            AttributeKind::Numeric => None,
        }
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self.kind, AttributeKind::Nominal(_))
    }

    /// Number of declared values; 0 for numeric attributes.
    pub fn num_values(&self) -> usize {
        self.values().map_or(0, <[String]>::len)
    }

    pub fn index_of(&self, value: &str) -> Option<usize> {
        self.values()?.iter().position(|v| v == value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellValue {
    Nominal(usize),
    Numeric(f64),
    Missing,
}

impl CellValue {
    pub fn is_missing(&self) -> bool {
        matches!(self, CellValue::Missing)
    }

    pub fn nominal(&self) -> Option<usize> {
        match *self {
            CellValue::Nominal(i) => Some(i),
            _ => None,
        }
    }
}

pub type Instance = Vec<CellValue>;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub relation: String,
    attributes: Vec<AttributeSpec>,
    instances: Vec<Instance>,
    target: Option<usize>,
}

impl Dataset {
    pub fn new(relation: impl Into<String>, attributes: Vec<AttributeSpec>) -> Self {
        Dataset { relation: relation.into(), attributes, instances: Vec::new(), target: None }
    }

    /// Builds a dataset and checks every row against the schema.
    pub fn with_instances(
        relation: impl Into<String>,
        attributes: Vec<AttributeSpec>,
        instances: Vec<Instance>,
    ) -> Result<Self> {
        let mut d = Dataset::new(relation, attributes);
        d.instances.reserve(instances.len());
        for row in instances {
            d.push(row)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, row: Instance) -> Result<()> {
        self.check_row(&row)?;
        self.instances.push(row);
        Ok(())
    }

    fn check_row(&self, row: &[CellValue]) -> Result<()> {
        if row.len() != self.attributes.len() {
            return Err(Error::data(format!(
                "row has {} cells, schema has {} attributes",
                row.len(),
                self.attributes.len()
            )));
        }
        for (cell, attr) in row.iter().zip(&self.attributes) {
            let ok = match (cell, &attr.kind) {
                (CellValue::Missing, _) => true,
                (CellValue::Nominal(i), AttributeKind::Nominal(v)) => *i < v.len(),
                (CellValue::Numeric(_), AttributeKind::Numeric) => true,
                _ => false,
            };
            if !ok {
                return Err(Error::data(format!("cell {cell:?} does not fit attribute {}", attr.name)));
            }
        }
        Ok(())
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &AttributeSpec {
        &self.attributes[index]
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    pub fn set_target(&mut self, index: Option<usize>) -> Result<()> {
        if let Some(i) = index {
            let attr = self.attributes.get(i).ok_or_else(|| Error::usage(format!("target index {i} out of range")))?;
            if !attr.is_nominal() {
                return Err(Error::usage(format!("target attribute {} is not nominal", attr.name)));
            }
        }
        self.target = index;
        Ok(())
    }

    /// Looks an attribute up by exact name, or by 1-based position when `key` is a number.
    pub fn find_attribute(&self, key: &str) -> Result<usize> {
        if let Some(i) = self.attributes.iter().position(|a| a.name == key) {
            return Ok(i);
        }
        match key.parse::<usize>() {
            Ok(n) if n >= 1 && n <= self.attributes.len() => Ok(n - 1),
            _ => Err(Error::usage(format!("no attribute named '{key}'"))),
        }
    }

    /// Class labels of the target attribute.
    pub fn class_values(&self) -> Option<&[String]> {
        self.attributes[self.target?].values()
    }

    /// Returns a copy holding only the given rows, in the given order.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            relation: self.relation.clone(),
            attributes: self.attributes.clone(),
            instances: rows.iter().map(|&r| self.instances[r].clone()).collect(),
            target: self.target,
        }
    }

    pub(crate) fn instances_mut(&mut self) -> &mut [Instance] {
        &mut self.instances
    }
}

/// Parses a 1-based attribute selection such as `1,3,6,8`, `2-4`, `first`, `last`.
///
/// Returns sorted, de-duplicated 0-based indices.
pub fn parse_ranges(spec: &str, num_attributes: usize) -> Result<Vec<usize>> {
    let resolve = |tok: &str| -> Result<usize> {
        let n = match tok.trim() {
            "first" => 1,
            "last" => num_attributes,
            t => t.parse::<usize>().map_err(|_| Error::usage(format!("bad attribute index '{t}'")))?,
        };
        if n == 0 || n > num_attributes {
            return Err(Error::usage(format!("attribute index {n} out of range 1..{num_attributes}")));
        }
        Ok(n - 1)
    };
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (resolve(lo)?, resolve(hi)?);
                if lo > hi {
                    return Err(Error::usage(format!("empty range '{part}'")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(resolve(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Drops the attributes selected by `ranges` (1-based, see [`parse_ranges`]).
///
/// A non-empty removal appends `-weka.filters.unsupervised.attribute.Remove-R{ranges}`
/// to the relation name, the lineage tag other ARFF tooling expects.
pub fn remove_attributes(d: &Dataset, ranges: &str) -> Result<Dataset> {
    let drop = parse_ranges(ranges, d.num_attributes())?;
    if drop.is_empty() {
        return Ok(d.clone());
    }
    let keep: Vec<usize> = (0..d.num_attributes()).filter(|i| !drop.contains(i)).collect();
    let compact: String = ranges.chars().filter(|c| !c.is_whitespace()).collect();
    let target = d.target.and_then(|t| keep.iter().position(|&k| k == t));
    Ok(Dataset {
        relation: format!("{}-weka.filters.unsupervised.attribute.Remove-R{compact}", d.relation),
        attributes: keep.iter().map(|&i| d.attributes[i].clone()).collect(),
        instances: d.instances.iter().map(|row| keep.iter().map(|&i| row[i]).collect()).collect(),
        target,
    })
}

/// Most frequent non-missing value of a nominal column (ties toward the lowest
/// index), or the arithmetic mean of a numeric column.
pub fn column_mode(d: &Dataset, attr: usize) -> Result<CellValue> {
    let spec = d.attributes.get(attr).ok_or_else(|| Error::usage(format!("attribute index {attr} out of range")))?;
    match &spec.kind {
        AttributeKind::Nominal(values) => {
            let mut counts = vec![0usize; values.len()];
            for row in &d.instances {
                if let CellValue::Nominal(v) = row[attr] {
                    counts[v] += 1;
                }
            }
            if counts.iter().all(|&c| c == 0) {
                return Err(Error::data(format!("attribute {} has only missing values", spec.name)));
            }
            Ok(CellValue::Nominal(argmax_first(counts.iter().copied())))
        }
        AttributeKind::Numeric => {
            let (sum, n) = d.instances.iter().fold((0.0, 0usize), |(s, n), row| match row[attr] {
                CellValue::Numeric(x) => (s + x, n + 1),
                _ => (s, n),
            });
            if n == 0 {
                return Err(Error::data(format!("attribute {} has only missing values", spec.name)));
            }
            Ok(CellValue::Numeric(sum / n as f64))
        }
    }
}

/// Index of the first maximum.
pub(crate) fn argmax_first<T: PartialOrd>(it: impl IntoIterator<Item = T>) -> usize {
    let mut best: Option<(usize, T)> = None;
    for (i, x) in it.into_iter().enumerate() {
        match &best {
            Some((_, b)) if x.partial_cmp(b) != Some(std::cmp::Ordering::Greater) => {}
            _ => best = Some((i, x)),
        }
    }
    best.map_or(0, |(i, _)| i)
}
