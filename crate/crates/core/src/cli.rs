//! Command-line driver.
//!
//! Exit codes: 0 success, 2 usage error, 3 data/format/I-O error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::arff::{parse_arff, write_arff};
use crate::cluster::{format_cluster_report, kmeans, read_assignments, write_assignments, ClusterParams};
use crate::csv::{parse_csv, RawTable};
use crate::dataset::{remove_attributes, AttributeSpec, CellValue, Dataset};
use crate::error::{Error, Result};
use crate::eval::{
    cross_validate_threaded, evaluate_on_training, format_report, summary_key_values, RunInfo, TestMode,
};
use crate::plot::{jitter_scatter, ColorBy, PlotSpec};
use crate::prep::normalize_titanic;
use crate::tree::{build_tree, print_tree, TreeParams};

/// Relative input paths that do not exist are also looked up here.
pub const DATA_DIR_ENV: &str = "TITANIC_DM_DATA";

#[derive(Debug, Parser)]
#[command(name = "titanic-dm", version, about = "Nominal data mining: ARFF tools, C4.5 trees, k-means, jitter plots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize the Kaggle Titanic CSV into the five-attribute nominal ARFF.
    Normalize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Relation name of the nine-column intermediate table.
        #[arg(long, default_value = "train4")]
        relation: String,
    },
    /// Convert any CSV to ARFF, treating every column as nominal.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Relation name; defaults to the input file stem.
        #[arg(long)]
        relation: Option<String>,
    },
    /// Attribute filters.
    Filter {
        #[command(subcommand)]
        filter: FilterCommand,
    },
    /// Build a C4.5 tree and evaluate it.
    Tree(TreeArgs),
    /// Cluster instances with k-means over nominal attributes.
    Cluster(ClusterArgs),
    /// Draw a jittered scatter plot of two nominal attributes as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
enum FilterCommand {
    /// Remove attributes by 1-based index ranges, e.g. `1,3,6,8` or `2-4`.
    Remove {
        #[arg(long)]
        indices: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[arg(long)]
    train: PathBuf,
    /// Class attribute (name or 1-based index); defaults to the first attribute.
    #[arg(long = "class")]
    class: Option<String>,
    #[arg(long, default_value_t = 0.25)]
    cf: f64,
    #[arg(long = "min-leaf", default_value_t = 2.0)]
    min_leaf: f64,
    #[arg(long = "no-prune")]
    no_prune: bool,
    #[arg(long = "subtree-raising")]
    subtree_raising: bool,
    /// Number of folds; 0 evaluates on the training data.
    #[arg(long, default_value_t = 10)]
    cv: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Include the model build time in the report.
    #[arg(long)]
    timings: bool,
    /// Also write key=value summary lines to this file.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    seed: u64,
    #[arg(long = "max-iter", default_value_t = 500)]
    max_iter: usize,
    /// Write `instance,cluster` lines to this CSV file.
    #[arg(long)]
    assignments: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long, conflicts_with = "assignments", required_unless_present = "assignments")]
    color: Option<String>,
    #[arg(long)]
    assignments: Option<PathBuf>,
    #[arg(long = "jitter-seed", default_value_t = 7)]
    jitter_seed: u64,
    #[arg(long, default_value_t = 720.0)]
    width: f64,
    #[arg(long, default_value_t = 480.0)]
    height: f64,
    #[arg(long, default_value_t = 3.0)]
    radius: f64,
    #[arg(long, default_value_t = 0.6)]
    opacity: f64,
    #[arg(long)]
    out: PathBuf,
}

fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
            let candidate = Path::new(&dir).join(path);
            if candidate.exists() {
                return candidate;
            }
        }
    }
    path.to_path_buf()
}

fn read(path: &Path) -> Result<String> {
    let path = resolve(path);
    std::fs::read_to_string(&path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

/// Prefixes data and format errors with the file they came from.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Data { msg, line } => Error::Data { msg: format!("{}: {msg}", path.display()), line },
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn load_arff(path: &Path) -> Result<Dataset> {
    let text = read(path)?;
    in_file(path, parse_arff(&text))
}

fn emit(out: &mut dyn Write, dest: Option<&Path>, text: &str) -> Result<()> {
    match dest {
        Some(p) => write(p, text),
        None => out.write_all(text.as_bytes()).map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}

/// Every column becomes nominal with values in order of first appearance;
/// empty cells are missing.
pub fn csv_to_nominal(raw: &RawTable, relation: &str) -> Result<Dataset> {
    let mut attrs = Vec::with_capacity(raw.header.len());
    for (c, name) in raw.header.iter().enumerate() {
        let mut values: Vec<&str> = Vec::new();
        for row in &raw.rows {
            let v = row[c].as_str();
            if !v.is_empty() && !values.contains(&v) {
                values.push(v);
            }
        }
        if values.is_empty() {
            return Err(Error::data(format!("column '{name}' has no values")));
        }
        attrs.push(AttributeSpec::nominal(name.as_str(), values)?);
    }
    let rows = raw
        .rows
        .iter()
        .map(|row| {
            row.iter().zip(&attrs).map(|(v, a)| a.index_of(v).map_or(CellValue::Missing, CellValue::Nominal)).collect()
        })
        .collect();
    Dataset::with_instances(relation, attrs, rows)
}

fn tree_command(a: &TreeArgs, out: &mut dyn Write) -> Result<()> {
    let params = TreeParams {
        confidence_factor: a.cf,
        min_instances: a.min_leaf,
        pruning_enabled: !a.no_prune,
        subtree_raising: a.subtree_raising,
    };
    params.validate()?;
    if a.cv == 1 {
        return Err(Error::usage("--cv must be 0 (training set) or at least 2"));
    }
    if a.threads == 0 {
        return Err(Error::usage("--threads must be at least 1"));
    }
    let mut d = load_arff(&a.train)?;
    let class = match &a.class {
        Some(key) => d.find_attribute(key)?,
        None if d.num_attributes() > 0 => 0,
        None => return Err(Error::usage("dataset has no attributes")),
    };
    d.set_target(Some(class))?;

    let started = Instant::now();
    let tree = build_tree(&d, &params)?;
    let elapsed = started.elapsed().as_secs_f64();
    let (ev, test_mode) = if a.cv == 0 {
        (evaluate_on_training(&d, &params)?.1, TestMode::TrainingSet)
    } else {
        (
            cross_validate_threaded(&d, &params, a.cv, a.seed, a.threads)?,
            TestMode::CrossValidation { folds: a.cv, seed: a.seed },
        )
    };
    let info = RunInfo {
        relation: d.relation.clone(),
        attributes: d.attributes().iter().map(|x| x.name.clone()).collect(),
        instances: d.len(),
        test_mode,
        build_seconds: a.timings.then_some(elapsed),
    };
    let report = format_report(&ev, &print_tree(&tree), &params, &info)?;
    if let Some(p) = &a.summary {
        write(p, &summary_key_values(&ev)?)?;
    }
    emit(out, a.out.as_deref(), &report)
}

fn cluster_command(a: &ClusterArgs, out: &mut dyn Write) -> Result<()> {
    let params = ClusterParams { k: a.k, seed: a.seed, max_iterations: a.max_iter };
    if a.k == 0 || a.max_iter == 0 {
        return Err(Error::usage("--k and --max-iter must be at least 1"));
    }
    let d = load_arff(&a.input)?;
    let model = kmeans(&d, &params)?;
    let report = format_cluster_report(&model, &d, &params)?;
    if let Some(p) = &a.assignments {
        write(p, &write_assignments(&model.assignment))?;
    }
    emit(out, a.out.as_deref(), &report)
}

fn plot_command(a: &PlotArgs) -> Result<()> {
    if a.radius.is_nan() || a.radius <= 0.0 || !(0.0..=1.0).contains(&a.opacity) {
        return Err(Error::usage("--radius must be positive and --opacity within [0, 1]"));
    }
    let d = load_arff(&a.input)?;
    let x = d.find_attribute(&a.x)?;
    let y = d.find_attribute(&a.y)?;
    let color_by = match (&a.color, &a.assignments) {
        (Some(c), _) => ColorBy::Attribute(d.find_attribute(c)?),
        (None, Some(p)) => ColorBy::Clusters(in_file(p, read_assignments(&read(p)?))?),
        (None, None) => return Err(Error::usage("one of --color or --assignments is required")),
    };
    let spec = PlotSpec {
        jitter_seed: a.jitter_seed,
        width: a.width,
        height: a.height,
        radius: a.radius,
        opacity: a.opacity,
        ..PlotSpec::new(x, y, color_by)
    };
    write(&a.out, &jitter_scatter(&d, &spec)?)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Normalize { input, output, relation } => {
            let raw = in_file(&input, parse_csv(&read(&input)?))?;
            let d = in_file(&input, normalize_titanic(&raw, &relation))?;
            write(&output, &write_arff(&d))
        }
        Command::Convert { input, output, relation } => {
            let relation = relation
                .unwrap_or_else(|| input.file_stem().map_or("data".into(), |s| s.to_string_lossy().into_owned()));
            let raw = in_file(&input, parse_csv(&read(&input)?))?;
            let d = in_file(&input, csv_to_nominal(&raw, &relation))?;
            write(&output, &write_arff(&d))
        }
        Command::Filter { filter: FilterCommand::Remove { indices, input, output } } => {
            let d = load_arff(&input)?;
            write(&output, &write_arff(&remove_attributes(&d, &indices)?))
        }
        Command::Tree(a) => tree_command(&a, out),
        Command::Cluster(a) => cluster_command(&a, out),
        Command::Plot(a) => plot_command(&a),
    }
}

/// Parses `argv` (including the program name) and runs the subcommand,
/// writing reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
