//! Deterministic rendering and atomic file emission. Tables are written to
//! a temporary file in the destination directory and renamed into place, so
//! readers never observe a half-written file. Numbers use the shortest
//! round-trip decimal form, lines end with a single LF.

use std::io::Write;
use std::path::Path;

use crate::conf::CliError;

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("cannot stage output near {}: {e}", path.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("cannot move output into {}: {e}", path.display())))?;
    Ok(())
}

pub fn csv_table(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(header.len() + 1 + rows.iter().map(|r| r.len() + 1).sum::<usize>());
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

pub fn json_table<T: serde::Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut text = serde_json::to_string(rows)
        .map_err(|e| CliError::Io(format!("cannot encode rows: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// A minimal deterministic line chart: fixed canvas, fixed palette, data
/// scaled into the plot box, one polyline per labeled curve.
pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    /// (label, points); every curve shares the same axes.
    pub curves: Vec<(String, Vec<(f64, f64)>)>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

pub fn render_chart(chart: &Chart) -> String {
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, points) in &chart.curves {
        for &(x, y) in points {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if !x_lo.is_finite() || x_hi <= x_lo {
        (x_lo, x_hi) = (0.0, 1.0);
    }
    if !y_lo.is_finite() || y_hi <= y_lo {
        (y_lo, y_hi) = (0.0, 1.0);
    }
    let px = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        chart.title
    ));
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{m:.1}\" y1=\"{b:.1}\" x2=\"{r:.1}\" y2=\"{b:.1}\" stroke=\"black\"/>\n\
         <line x1=\"{m:.1}\" y1=\"{t:.1}\" x2=\"{m:.1}\" y2=\"{b:.1}\" stroke=\"black\"/>\n",
        m = MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 16.0,
        chart.x_label
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        chart.y_label
    ));
    // Axis extents.
    svg.push_str(&format!(
        "<text x=\"{m:.1}\" y=\"{b2:.1}\" text-anchor=\"middle\">{x_lo}</text>\n\
         <text x=\"{r:.1}\" y=\"{b2:.1}\" text-anchor=\"middle\">{x_hi}</text>\n\
         <text x=\"{m2:.1}\" y=\"{b:.1}\" text-anchor=\"end\">{y_lo}</text>\n\
         <text x=\"{m2:.1}\" y=\"{t:.1}\" text-anchor=\"end\">{y_hi}</text>\n",
        m = MARGIN,
        m2 = MARGIN - 6.0,
        r = WIDTH - MARGIN,
        t = MARGIN + 4.0,
        b = HEIGHT - MARGIN + 4.0,
        b2 = HEIGHT - MARGIN + 18.0,
    ));
    for (i, (label, points)) in chart.curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">{label}</text>\n",
            WIDTH - MARGIN + 6.0,
            MARGIN + 16.0 * i as f64,
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
