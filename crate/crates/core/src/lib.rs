//! Data-mining toolkit for nominal data: CSV and ARFF I/O, the Titanic
//! normalization recipe, C4.5 decision trees with pessimistic pruning,
//! stratified cross-validation reports, k-means over nominal attributes and
//! jittered SVG scatter plots.

pub mod arff;
#[cfg(feature = "cli")]
pub mod cli;
pub mod cluster;
pub mod csv;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod plot;
pub mod prep;
pub mod rng;
pub mod textfmt;
pub mod tree;

pub use dataset::{AttributeKind, AttributeSpec, CellValue, Dataset};
pub use error::{Error, Result};
