//! Jittered scatter plots of one nominal attribute against another, rendered
//! as standalone SVG.

use std::fmt::Write;

use rand::Rng;

use crate::dataset::{CellValue, Dataset};
use crate::error::{Error, Result};
use crate::rng;

pub const DEFAULT_PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];
const MISSING_COLOR: &str = "#999999";
/// Half-width of the jitter window as a fraction of a category band.
pub const JITTER: f64 = 0.35;

const MARGIN_LEFT: f64 = 110.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ColorBy {
    Attribute(usize),
    /// Cluster index per instance.
    Clusters(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x_attr: usize,
    pub y_attr: usize,
    pub color_by: ColorBy,
    pub jitter_seed: u64,
    pub width: f64,
    pub height: f64,
    pub palette: Vec<String>,
    pub radius: f64,
    pub opacity: f64,
}

impl PlotSpec {
    pub fn new(x_attr: usize, y_attr: usize, color_by: ColorBy) -> Self {
        PlotSpec {
            x_attr,
            y_attr,
            color_by,
            jitter_seed: 7,
            width: 720.0,
            height: 480.0,
            palette: DEFAULT_PALETTE.iter().map(|c| c.to_string()).collect(),
            radius: 3.0,
            opacity: 0.6,
        }
    }
}

/// Pixel geometry of a rendered plot; exposed so callers can check where a
/// category band lies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub left: f64,
    pub top: f64,
    pub plot_width: f64,
    pub plot_height: f64,
    pub x_bands: usize,
    pub y_bands: usize,
}

impl Frame {
    pub fn band_width(&self) -> f64 {
        self.plot_width / self.x_bands as f64
    }

    pub fn band_height(&self) -> f64 {
        self.plot_height / self.y_bands as f64
    }

    /// Horizontal extent `[lo, hi]` of x category `i`.
    pub fn x_band(&self, i: usize) -> (f64, f64) {
        let lo = self.left + i as f64 * self.band_width();
        (lo, lo + self.band_width())
    }

    /// Vertical extent `[lo, hi]` of y category `j`; category 0 sits at the bottom.
    pub fn y_band(&self, j: usize) -> (f64, f64) {
        let hi = self.top + self.plot_height - j as f64 * self.band_height();
        (hi - self.band_height(), hi)
    }
}

pub fn frame(d: &Dataset, spec: &PlotSpec) -> Result<Frame> {
    let bands = |a: usize, axis: &str| -> Result<usize> {
        let attr =
            d.attributes().get(a).ok_or_else(|| Error::usage(format!("{axis} attribute index {a} out of range")))?;
        match attr.num_values() {
            0 => Err(Error::usage(format!("{axis} attribute {} is not nominal", attr.name))),
            n => Ok(n),
        }
    };
    let f = Frame {
        left: MARGIN_LEFT,
        top: MARGIN_TOP,
        plot_width: spec.width - MARGIN_LEFT - MARGIN_RIGHT,
        plot_height: spec.height - MARGIN_TOP - MARGIN_BOTTOM,
        x_bands: bands(spec.x_attr, "x")?,
        y_bands: bands(spec.y_attr, "y")?,
    };
    if f.plot_width <= 0.0 || f.plot_height <= 0.0 {
        return Err(Error::usage(format!("plot size {}x{} is too small", spec.width, spec.height)));
    }
    Ok(f)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Legend entries and the color category of each instance (`None` = missing).
fn color_categories(d: &Dataset, spec: &PlotSpec) -> Result<(String, Vec<String>, Vec<Option<usize>>)> {
    match &spec.color_by {
        ColorBy::Attribute(a) => {
            let attr = d
                .attributes()
                .get(*a)
                .ok_or_else(|| Error::usage(format!("color attribute index {a} out of range")))?;
            let values =
                attr.values().ok_or_else(|| Error::usage(format!("color attribute {} is not nominal", attr.name)))?;
            let cats = d.instances().iter().map(|r| r[*a].nominal()).collect();
            Ok((attr.name.clone(), values.to_vec(), cats))
        }
        ColorBy::Clusters(assignment) => {
            if assignment.len() != d.len() {
                return Err(Error::usage(format!(
                    "{} cluster assignments for {} instances",
                    assignment.len(),
                    d.len()
                )));
            }
            let k = assignment.iter().max().map_or(0, |m| m + 1);
            let names = (0..k).map(|c| format!("cluster{c}")).collect();
            Ok(("Cluster".to_string(), names, assignment.iter().map(|&c| Some(c)).collect()))
        }
    }
}

/// Renders one circle per instance at its (x, y) category, jittered uniformly
/// within ±[`JITTER`] of a band. Identical inputs give byte-identical output.
pub fn jitter_scatter(d: &Dataset, spec: &PlotSpec) -> Result<String> {
    let f = frame(d, spec)?;
    let (legend_title, categories, cats) = color_categories(d, spec)?;
    if spec.palette.len() < categories.len() {
        return Err(Error::usage(format!(
            "palette has {} colors but {} categories need coloring",
            spec.palette.len(),
            categories.len()
        )));
    }
    let x_attr = d.attribute(spec.x_attr);
    let y_attr = d.attribute(spec.y_attr);
    let x_values = x_attr.values().expect("checked nominal");
    let y_values = y_attr.values().expect("checked nominal");

    let mut svg = String::new();
    let (w, h) = (spec.width, spec.height);
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text class="title" x="{:.2}" y="20" text-anchor="middle" font-size="14">{} vs. {}</text>"#,
        f.left + f.plot_width / 2.0,
        escape(&y_attr.name),
        escape(&x_attr.name)
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444444"/>"##,
        f.left, f.top, f.plot_width, f.plot_height
    );

    svg.push_str("<g class=\"x-ticks\">\n");
    let base = f.top + f.plot_height;
    for (i, v) in x_values.iter().enumerate() {
        let (lo, hi) = f.x_band(i);
        if i > 0 {
            let _ = writeln!(
                svg,
                r##"<line x1="{lo:.2}" y1="{:.2}" x2="{lo:.2}" y2="{base:.2}" stroke="#dddddd"/>"##,
                f.top
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (lo + hi) / 2.0,
            base + 18.0,
            escape(v)
        );
    }
    svg.push_str("</g>\n<g class=\"y-ticks\">\n");
    for (j, v) in y_values.iter().enumerate() {
        let (lo, hi) = f.y_band(j);
        if j > 0 {
            let _ = writeln!(
                svg,
                r##"<line x1="{:.2}" y1="{hi:.2}" x2="{:.2}" y2="{hi:.2}" stroke="#dddddd"/>"##,
                f.left,
                f.left + f.plot_width
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            f.left - 8.0,
            (lo + hi) / 2.0 + 4.0,
            escape(v)
        );
    }
    svg.push_str("</g>\n");
    let _ = writeln!(
        svg,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        f.left + f.plot_width / 2.0,
        h - 15.0,
        escape(&x_attr.name)
    );
    let _ = writeln!(
        svg,
        r#"<text class="y-label" x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        f.top + f.plot_height / 2.0,
        f.top + f.plot_height / 2.0,
        escape(&y_attr.name)
    );

    let mut rng = rng::seeded(spec.jitter_seed);
    svg.push_str("<g class=\"points\">\n");
    for (row, cat) in d.instances().iter().zip(&cats) {
        let (CellValue::Nominal(xi), CellValue::Nominal(yi)) = (row[spec.x_attr], row[spec.y_attr]) else {
            return Err(Error::data(format!("missing value on plot axis ({} or {})", x_attr.name, y_attr.name)));
        };
        let dx: f64 = (rng.gen::<f64>() * 2.0 - 1.0) * JITTER * f.band_width();
        let dy: f64 = (rng.gen::<f64>() * 2.0 - 1.0) * JITTER * f.band_height();
        let (xlo, xhi) = f.x_band(xi);
        let (ylo, yhi) = f.y_band(yi);
        let color = match cat {
            Some(c) => spec.palette[*c].as_str(),
            None => MISSING_COLOR,
        };
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{}" fill="{color}" fill-opacity="{}"/>"#,
            (xlo + xhi) / 2.0 + dx,
            (ylo + yhi) / 2.0 + dy,
            spec.radius,
            spec.opacity
        );
    }
    svg.push_str("</g>\n");

    let lx = f.left + f.plot_width + 20.0;
    let _ = writeln!(
        svg,
        "<g class=\"legend\">\n<text x=\"{lx:.2}\" y=\"{:.2}\" font-weight=\"bold\">{}</text>",
        f.top + 10.0,
        escape(&legend_title)
    );
    let mut entries: Vec<(&str, &str)> =
        categories.iter().zip(&spec.palette).map(|(n, c)| (n.as_str(), c.as_str())).collect();
    if cats.iter().any(Option::is_none) {
        entries.push(("?", MISSING_COLOR));
    }
    for (i, (name, color)) in entries.iter().enumerate() {
        let y = f.top + 30.0 + 20.0 * i as f64;
        let _ = writeln!(svg, r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#, lx, y - 9.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, lx + 16.0, escape(name));
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
