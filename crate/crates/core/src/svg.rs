//! Deterministic SVG rendering of depth artifacts.
//!
//! Every document has an 800×600 view box and a legend naming the depth
//! method. Coordinates are printed with a fixed number of decimals so equal
//! inputs give equal bytes.

use std::fmt::Write;

use crate::binning::BinGrid2D;
use crate::data::DataMatrix;
use crate::depth::DepthGrid;
use crate::error::{DepthError, Result};
use crate::geometry::ConvexHull;
use crate::inference::{CurveData, CurveKind, DDPlotData, SampleLabel};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;

/// Linear map from a data box to the plotting area, y pointing up.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn covering(xs: impl IntoIterator<Item = f64>, ys: impl IntoIterator<Item = f64>) -> Self {
        let span = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, lo + 0.5)
            }
        };
        let (x0, x1) = span(&mut xs.into_iter());
        let (y0, y1) = span(&mut ys.into_iter());
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

struct Doc {
    body: String,
}

impl Doc {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
        );
        let _ = writeln!(body, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{:.0}" y="30" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        Self { body }
    }

    fn axes(&mut self, f: &Frame) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        let labels = [
            (MARGIN, HEIGHT - MARGIN + 18.0, "start", f.x0),
            (WIDTH - MARGIN, HEIGHT - MARGIN + 18.0, "end", f.x1),
        ];
        for (x, y, anchor, v) in labels {
            let _ = writeln!(
                self.body,
                r#"<text x="{x:.0}" y="{y:.0}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{}</text>"#,
                tick(v)
            );
        }
        for (y, v) in [(HEIGHT - MARGIN, f.y0), (MARGIN + 4.0, f.y1)] {
            let _ = writeln!(
                self.body,
                r#"<text x="{:.0}" y="{y:.0}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
                MARGIN - 6.0,
                tick(v)
            );
        }
    }

    fn legend(&mut self, lines: &[String]) {
        for (k, line) in lines.iter().enumerate() {
            let _ = writeln!(
                self.body,
                r#"<text class="legend" x="{:.0}" y="{:.0}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
                WIDTH - MARGIN - 6.0,
                MARGIN + 16.0 + 15.0 * k as f64,
                escape(line)
            );
        }
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn tick(v: f64) -> String {
    format!("{:.3}", v)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Blue ramp from white (t = 0) to dark blue (t = 1).
fn shade(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let r = (255.0 * (1.0 - 0.85 * t)).round() as u8;
    let g = (255.0 * (1.0 - 0.6 * t)).round() as u8;
    format!("#{r:02x}{g:02x}ff")
}

fn method_line(method: &str) -> String {
    format!("method: {method}")
}

/// Marching-squares segments of the level set `z = level`.
fn contour_segments(grid: &DepthGrid, level: f64) -> Vec<[(f64, f64); 2]> {
    let (xs, ys, z) = (&grid.xs, &grid.ys, &grid.z);
    let mut segs = Vec::new();
    for i in 0..ys.len().saturating_sub(1) {
        for j in 0..xs.len().saturating_sub(1) {
            // Corners counter-clockwise from (j, i).
            let c = [
                (xs[j], ys[i], z[i][j]),
                (xs[j + 1], ys[i], z[i][j + 1]),
                (xs[j + 1], ys[i + 1], z[i + 1][j + 1]),
                (xs[j], ys[i + 1], z[i + 1][j]),
            ];
            let mut cuts = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (c[e], c[(e + 1) % 4]);
                if (a.2 >= level) != (b.2 >= level) {
                    let t = (level - a.2) / (b.2 - a.2);
                    cuts.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
                }
            }
            for pair in cuts.chunks_exact(2) {
                segs.push([pair[0], pair[1]]);
            }
        }
    }
    segs
}

/// Filled depth cells with contour lines at the deciles of the depth range.
pub fn render_grid(grid: &DepthGrid, title: &str, method: &str) -> Result<String> {
    if grid.xs.is_empty() || grid.ys.is_empty() {
        return Err(DepthError::invalid("cannot render an empty grid"));
    }
    let half = |v: &[f64]| if v.len() > 1 { 0.5 * (v[1] - v[0]).abs() } else { 0.5 };
    let (hx, hy) = (half(&grid.xs), half(&grid.ys));
    let f = Frame::covering(
        grid.xs.iter().flat_map(|&x| [x - hx, x + hx]),
        grid.ys.iter().flat_map(|&y| [y - hy, y + hy]),
    );
    let values = grid.z.iter().flatten().copied();
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let range = if hi > lo { hi - lo } else { 1.0 };
    let mut doc = Doc::new(title);
    for (i, &y) in grid.ys.iter().enumerate() {
        for (j, &x) in grid.xs.iter().enumerate() {
            let (l, r) = (f.px(x - hx), f.px(x + hx));
            let (t, b) = (f.py(y + hy), f.py(y - hy));
            let _ = writeln!(
                doc.body,
                r#"<rect class="cell" x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                r - l,
                b - t,
                shade((grid.z[i][j] - lo) / range)
            );
        }
    }
    if hi > lo {
        for k in 1..10 {
            let level = lo + range * k as f64 / 10.0;
            let mut d = String::new();
            for [a, b] in contour_segments(grid, level) {
                let _ = write!(d, "M{:.2} {:.2}L{:.2} {:.2}", f.px(a.0), f.py(a.1), f.px(b.0), f.py(b.1));
            }
            if !d.is_empty() {
                let _ = writeln!(
                    doc.body,
                    r#"<path class="contour" data-level="{level:.4}" d="{d}" fill="none" stroke="black" stroke-width="0.8"/>"#
                );
            }
        }
    }
    doc.axes(&f);
    doc.legend(&[method_line(method), format!("depth {} to {}", tick(lo), tick(hi))]);
    Ok(doc.finish())
}

/// Curve as a single polyline.
pub fn render_curve(curve: &CurveData, method: &str) -> Result<String> {
    if curve.alphas.is_empty() {
        return Err(DepthError::invalid("cannot render an empty curve"));
    }
    let f = Frame::covering(
        curve.alphas.iter().copied().chain([0.0, 1.0]),
        curve.values.iter().copied().chain([0.0]),
    );
    let title = match curve.kind {
        CurveKind::Scale => "Scale curve",
        CurveKind::Asymmetry => "Asymmetry curve",
    };
    let mut doc = Doc::new(title);
    let pts: Vec<String> = curve
        .alphas
        .iter()
        .zip(&curve.values)
        .map(|(&a, &v)| format!("{:.2},{:.2}", f.px(a), f.py(v)))
        .collect();
    let _ = writeln!(
        doc.body,
        r#"<polyline class="curve" points="{}" fill="none" stroke="navy" stroke-width="2"/>"#,
        pts.join(" ")
    );
    doc.axes(&f);
    doc.legend(&[method_line(method)]);
    Ok(doc.finish())
}

/// DD-plot scatter with the reference diagonal.
pub fn render_ddplot(dd: &DDPlotData, title: &str, method: &str) -> Result<String> {
    if dd.points_x.is_empty() {
        return Err(DepthError::invalid("cannot render an empty DD-plot"));
    }
    let top = dd.points_x.iter().chain(&dd.points_y).copied().fold(0.0, f64::max).max(1e-12);
    let f = Frame::covering([0.0, top], [0.0, top]);
    let mut doc = Doc::new(title);
    let _ = writeln!(
        doc.body,
        r#"<line class="diagonal" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="6 4"/>"#,
        f.px(0.0),
        f.py(0.0),
        f.px(top),
        f.py(top)
    );
    for ((&a, &b), l) in dd.points_x.iter().zip(&dd.points_y).zip(&dd.labels) {
        let color = match l {
            SampleLabel::X => "steelblue",
            SampleLabel::Y => "firebrick",
        };
        let _ = writeln!(
            doc.body,
            r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}" fill-opacity="0.7"/>"#,
            f.px(a),
            f.py(b)
        );
    }
    doc.axes(&f);
    doc.legend(&[method_line(method), "blue: first sample, red: second sample".into()]);
    Ok(doc.finish())
}

/// A line `y = intercept + slope·x` drawn across a scatter plot.
pub struct Line {
    pub intercept: f64,
    pub slope: f64,
    pub label: String,
}

/// Extra elements for [`render_scatter`].
#[derive(Default)]
pub struct Overlay<'a> {
    pub lines: &'a [Line],
    pub hull: Option<&'a ConvexHull>,
    pub markers: &'a [[f64; 2]],
    /// Per-point shading in [0, 1].
    pub shading: Option<&'a [f64]>,
}

/// Bivariate scatter with optional fitted lines, hull and highlighted points.
pub fn render_scatter(points: &DataMatrix, overlay: &Overlay, title: &str, method: &str) -> Result<String> {
    if points.nrows() == 0 || points.ncols() != 2 {
        return Err(DepthError::invalid("scatter plots need a non-empty two-column sample"));
    }
    let hull_pts = overlay.hull.map(|h| h.vertices.as_slice()).unwrap_or(&[]);
    let f = Frame::covering(
        points.column(0).into_iter().chain(overlay.markers.iter().map(|m| m[0])),
        points.column(1).into_iter().chain(overlay.markers.iter().map(|m| m[1])),
    );
    let mut doc = Doc::new(title);
    if hull_pts.len() >= 2 {
        let pts: Vec<String> = hull_pts.iter().map(|p| format!("{:.2},{:.2}", f.px(p[0]), f.py(p[1]))).collect();
        let _ = writeln!(
            doc.body,
            r#"<polygon class="hull" points="{}" fill="orange" fill-opacity="0.25" stroke="darkorange"/>"#,
            pts.join(" ")
        );
    }
    for (i, r) in points.rows().enumerate() {
        let fill = overlay.shading.map_or_else(|| "steelblue".to_string(), |s| shade(s[i]));
        let _ = writeln!(
            doc.body,
            r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="3" fill="{fill}" stroke="gray" stroke-width="0.5"/>"#,
            f.px(r[0]),
            f.py(r[1])
        );
    }
    let colors = ["firebrick", "darkgreen", "purple", "black"];
    let mut legend = vec![method_line(method)];
    if !overlay.lines.is_empty() {
        let _ = writeln!(
            doc.body,
            r#"<clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}"/></clipPath>"#,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
    }
    for (k, line) in overlay.lines.iter().enumerate() {
        let color = colors[k % colors.len()];
        let _ = writeln!(
            doc.body,
            r#"<line class="fit" clip-path="url(#plot)" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
            f.px(f.x0),
            f.py(line.intercept + line.slope * f.x0),
            f.px(f.x1),
            f.py(line.intercept + line.slope * f.x1)
        );
        legend.push(format!("{color}: {}", line.label));
    }
    for m in overlay.markers {
        let _ = writeln!(
            doc.body,
            r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="6" fill="none" stroke="red" stroke-width="2"/>"#,
            f.px(m[0]),
            f.py(m[1])
        );
    }
    doc.axes(&f);
    doc.legend(&legend);
    Ok(doc.finish())
}

/// Retained bins shaded by count.
pub fn render_bins(grid: &BinGrid2D, method: &str) -> Result<String> {
    if grid.midpoints_retained.is_empty() {
        return Err(DepthError::invalid("cannot render an empty binning"));
    }
    let step = grid.breaks_x[1] - grid.breaks_x[0];
    let h = 0.5 * step;
    let f = Frame::covering(
        grid.midpoints_retained.iter().flat_map(|m| [m[0] - h, m[0] + h]),
        grid.midpoints_retained.iter().flat_map(|m| [m[1] - h, m[1] + h]),
    );
    let top = grid.counts_retained.iter().copied().max().unwrap_or(0).max(1) as f64;
    let mut doc = Doc::new("Depth binning");
    for (m, &c) in grid.midpoints_retained.iter().zip(&grid.counts_retained) {
        let (l, r) = (f.px(m[0] - h), f.px(m[0] + h));
        let (t, b) = (f.py(m[1] + h), f.py(m[1] - h));
        let _ = writeln!(
            doc.body,
            r#"<rect class="cell" x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="lightgray"/>"#,
            r - l,
            b - t,
            shade(c as f64 / top)
        );
        let _ = writeln!(
            doc.body,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{c}</text>"#,
            0.5 * (l + r),
            0.5 * (t + b) + 3.0
        );
    }
    doc.axes(&f);
    doc.legend(&[method_line(method)]);
    Ok(doc.finish())
}
