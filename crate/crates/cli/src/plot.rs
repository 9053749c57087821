//! Deterministic SVG line plots of sweep and resource CSVs against `p_actual`.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

/// Chemical accuracy, Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.5e-3;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Energy,
    Cnot,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "energy" => Ok(Metric::Energy),
            "cnot" => Ok(Metric::Cnot),
            other => Err(format!("unknown metric '{other}' (expected energy or cnot)")),
        }
    }
}

impl Metric {
    fn column(self) -> &'static str {
        match self {
            Metric::Energy => "energy",
            Metric::Cnot => "cnot_opt",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Metric::Energy => "energy (Ha)",
            Metric::Cnot => "CNOT count",
        }
    }
}

/// Horizontal reference energies drawn on energy plots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct References {
    pub e_hf: f64,
    pub e_fci: f64,
}

#[derive(Debug, Default)]
struct Series {
    /// `(p_actual, value)`; points without `p_actual` are baselines.
    points: Vec<(f64, f64)>,
    flat: Vec<f64>,
}

/// Reads `csv_path` and renders the plot. `fallback` supplies reference
/// lines when the file has no rows to take them from.
pub fn render(csv_path: &Path, metric: Metric, fallback: Option<References>) -> Result<String> {
    let schema = |msg: String| CliError::Schema { path: csv_path.to_path_buf(), msg };
    let mut reader = csv::Reader::from_path(csv_path).map_err(CliError::csv(csv_path))?;
    let header = reader.headers().map_err(CliError::csv(csv_path))?.clone();
    let col =
        |name: &str| header.iter().position(|h| h == name).ok_or_else(|| schema(format!("missing column '{name}'")));
    let (c_ansatz, c_n, c_p, c_y) = (col("ansatz")?, col("n_trotter")?, col("p_actual")?, col(metric.column())?);
    let refs_cols = match metric {
        Metric::Energy => Some((col("e_hf")?, col("e_fci")?)),
        Metric::Cnot => None,
    };

    let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| schema(format!("bad {what} value '{s}'")));
    let mut series: BTreeMap<(String, Option<u64>), Series> = BTreeMap::new();
    let mut refs = None;
    for record in reader.records() {
        let r = record.map_err(CliError::csv(csv_path))?;
        if let Some((h, f)) = refs_cols {
            if refs.is_none() {
                refs = Some(References { e_hf: num(&r[h], "e_hf")?, e_fci: num(&r[f], "e_fci")? });
            }
        }
        // failed points carry no value
        if r[c_y].is_empty() {
            continue;
        }
        let y = num(&r[c_y], metric.column())?;
        let n = if r[c_n].is_empty() { None } else { Some(num(&r[c_n], "n_trotter")? as u64) };
        let s = series.entry((r[c_ansatz].to_string(), n)).or_default();
        if r[c_p].is_empty() {
            s.flat.push(y);
        } else {
            s.points.push((num(&r[c_p], "p_actual")?, y));
        }
    }
    let refs = match metric {
        Metric::Energy => refs.or(fallback),
        Metric::Cnot => None,
    };
    Ok(svg(metric, &series, refs))
}

/// Writes the SVG for `csv_path` to `out`.
pub fn cmd_plot(csv_path: &Path, metric: Metric, fallback: Option<References>, out: &Path) -> Result<()> {
    let text = render(csv_path, metric, fallback)?;
    crate::output::write_atomic(out, text.as_bytes())
}

fn y_range(series: &BTreeMap<(String, Option<u64>), Series>, refs: Option<References>) -> (f64, f64) {
    let mut values: Vec<f64> =
        series.values().flat_map(|s| s.points.iter().map(|p| p.1).chain(s.flat.iter().copied())).collect();
    if let Some(r) = refs {
        values.extend([r.e_hf, r.e_fci - CHEMICAL_ACCURACY, r.e_fci + CHEMICAL_ACCURACY]);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn svg(metric: Metric, series: &BTreeMap<(String, Option<u64>), Series>, refs: Option<References>) -> String {
    let (y_lo, y_hi) = y_range(series, refs);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |p: f64| LEFT + p * pw;
    let sy = |v: f64| TOP + (y_hi - v) / (y_hi - y_lo) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    if let Some(r) = refs {
        let (top, bottom) = (sy(r.e_fci + CHEMICAL_ACCURACY), sy(r.e_fci - CHEMICAL_ACCURACY));
        let _ = writeln!(
            s,
            r##"<rect class="band" x="{:.2}" y="{top:.2}" width="{pw:.2}" height="{:.2}" fill="#cccccc" fill-opacity="0.4"/>"##,
            LEFT,
            bottom - top
        );
        for (class, value, color, dash) in [("e_fci", r.e_fci, "#000000", "none"), ("e_hf", r.e_hf, "#555555", "6 4")] {
            let y = sy(value);
            let _ = writeln!(
                s,
                r#"<line class="{class}" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-dasharray="{dash}"/>"#,
                LEFT,
                LEFT + pw
            );
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{class}</text>"#, LEFT + pw + 6.0, y + 4.0);
        }
    }

    // axes, ticks and labels
    let _ = writeln!(
        s,
        r#"<path class="axes" d="M{LEFT:.2},{TOP:.2} V{:.2} H{:.2}" fill="none" stroke="black"/>"#,
        TOP + ph,
        LEFT + pw
    );
    for k in 0..=5 {
        let p = k as f64 / 5.0;
        let x = sx(p);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            TOP + ph,
            TOP + ph + 4.0
        );
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{p:.1}</text>"#, TOP + ph + 16.0);
    }
    let digits = ((y_hi - y_lo).log10().floor() as i64 - 1).min(0).unsigned_abs() as usize;
    for k in 0..=5 {
        let v = y_lo + (y_hi - y_lo) * k as f64 / 5.0;
        let y = sy(v);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/>"#, LEFT - 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.digits$}</text>"#, LEFT - 6.0, y + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">p_actual</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        metric.label()
    );

    for (k, ((ansatz, n), data)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let label = match n {
            Some(n) => format!("{ansatz} N={n}"),
            None => ansatz.clone(),
        };
        let mut pts = data.points.clone();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        if !pts.is_empty() {
            let coords: Vec<String> = pts.iter().map(|&(p, v)| format!("{:.2},{:.2}", sx(p), sy(v))).collect();
            let _ = writeln!(
                s,
                r#"<polyline class="series" data-label="{label}" points="{}" fill="none" stroke="{color}"/>"#,
                coords.join(" ")
            );
            for &(p, v) in &pts {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(p), sy(v));
            }
        }
        for &v in &data.flat {
            let y = sy(v);
            let _ = writeln!(
                s,
                r#"<line class="baseline" data-label="{label}" x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-dasharray="2 3"/>"#,
                LEFT + pw
            );
        }
        let ly = TOP + 40.0 + 16.0 * k as f64;
        let lx = LEFT + pw + 6.0;
        let _ = writeln!(s, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}"/>"#, lx + 14.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{label}</text>"#, lx + 18.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_range_degenerate_and_empty() {
        assert_eq!(y_range(&BTreeMap::new(), None), (0.0, 1.0));
        let mut m = BTreeMap::new();
        m.insert(("tvha".into(), Some(1)), Series { points: vec![(0.5, 3.0)], flat: vec![] });
        assert_eq!(y_range(&m, None), (2.0, 4.0));
    }
}
