use std::fmt::Write;

use crate::curves::{ChartKind, Curve, LineGeometry, LineRole, ReferenceLine};
use crate::error::{Error, Result};
use crate::render::format::format_significant;

pub const DEFAULT_PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const DISPLAY_DIGITS: usize = 6;
const LEGEND_LINE_HEIGHT: f64 = 16.0;
const LEGEND_MAX_CHARS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct ChartStyle {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    /// Same data units per pixel on both axes, so slopes keep their angle.
    pub equal_scale: bool,
    pub class_palette: Vec<String>,
    pub isobar_levels: Vec<f64>,
}

impl Default for ChartStyle {
    fn default() -> Self {
        ChartStyle {
            width: 800.0,
            height: 600.0,
            margin: 60.0,
            equal_scale: false,
            class_palette: DEFAULT_PALETTE.iter().map(|c| c.to_string()).collect(),
            isobar_levels: vec![0.25, 0.5, 0.75],
        }
    }
}

impl ChartStyle {
    /// Defaults for one chart kind; ROC, BOC and PR use equal scaling.
    pub fn for_kind(kind: ChartKind) -> Self {
        ChartStyle {
            equal_scale: matches!(kind, ChartKind::Roc | ChartKind::Boc | ChartKind::Pr),
            ..Self::default()
        }
    }

    fn color(&self, class: usize) -> &str {
        if self.class_palette.is_empty() {
            return "#000000";
        }
        &self.class_palette[class % self.class_palette.len()]
    }
}

/// Data window and the pixel rectangle it maps onto.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub left: f64,
    pub right: f64,
    pub top: f64,
    pub bottom: f64,
}

impl Viewport {
    pub fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x_min) / (self.x_max - self.x_min) * (self.right - self.left)
    }

    pub fn py(&self, y: f64) -> f64 {
        self.bottom - (y - self.y_min) / (self.y_max - self.y_min) * (self.bottom - self.top)
    }

    pub fn data_x(&self, px: f64) -> f64 {
        self.x_min + (px - self.left) / (self.right - self.left) * (self.x_max - self.x_min)
    }

    pub fn data_y(&self, py: f64) -> f64 {
        self.y_min + (self.bottom - py) / (self.bottom - self.top) * (self.y_max - self.y_min)
    }

    fn describe(&self) -> String {
        let f = |v: f64| format_significant(v, 17);
        format!(
            "x=[{},{}] y=[{},{}] px=[{},{}] py=[{},{}]",
            f(self.x_min),
            f(self.x_max),
            f(self.y_min),
            f(self.y_max),
            f(self.left),
            f(self.right),
            f(self.bottom),
            f(self.top)
        )
    }

    /// Inverse of the text written into the chart's `<metadata>` element.
    pub fn parse_description(text: &str) -> Option<Viewport> {
        let mut values = Vec::new();
        for part in text.split_whitespace() {
            let (_, range) = part.split_once('=')?;
            let (a, b) = range
                .strip_prefix('[')?
                .strip_suffix(']')?
                .split_once(',')?;
            values.push(a.parse::<f64>().ok()?);
            values.push(b.parse::<f64>().ok()?);
        }
        match values[..] {
            [x_min, x_max, y_min, y_max, left, right, bottom, top] => Some(Viewport {
                x_min,
                x_max,
                y_min,
                y_max,
                left,
                right,
                top,
                bottom,
            }),
            _ => None,
        }
    }
}

/// Step of roughly `span / 5` from the 1-2-5 sequence.
fn nice_step(span: f64) -> f64 {
    if !(span.is_finite() && span > 0.0) {
        return 1.0;
    }
    let raw = span / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let fraction = raw / magnitude;
    let nice = if fraction <= 1.0 {
        1.0
    } else if fraction <= 2.0 {
        2.0
    } else if fraction <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * magnitude
}

fn widen(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let step = nice_step(hi - lo);
        ((lo / step).floor() * step, (hi / step).ceil() * step)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn data_range(
    curves: &[Curve],
    pick: impl Fn(&crate::curves::CurvePoint) -> f64,
) -> Option<(f64, f64)> {
    curves
        .iter()
        .flat_map(|c| c.points.iter())
        .map(pick)
        .filter(|v| v.is_finite())
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

fn data_window(kind: ChartKind, curves: &[Curve]) -> (f64, f64, f64, f64) {
    let xs = data_range(curves, |p| p.x).unwrap_or((0.0, 1.0));
    let ys = data_range(curves, |p| p.y).unwrap_or((0.0, 1.0));
    match kind {
        ChartKind::Roc | ChartKind::Pr | ChartKind::Lift => (0.0, 1.0, 0.0, 1.0),
        ChartKind::Boc | ChartKind::Bift => (0.0, 1.0, -1.0, 1.0),
        ChartKind::Bprd => {
            let (x0, x1) = widen(xs.0.min(1.0), xs.1.max(1.0));
            (x0.max(0.0), x1, -1.0, 1.0)
        }
        ChartKind::Bird => {
            let (y0, y1) = widen(ys.0.min(0.0), ys.1.max(0.0));
            (xs.0.min(0.0).floor(), xs.1.max(0.0).ceil(), y0, y1)
        }
        ChartKind::Pn | ChartKind::DeltaPn | ChartKind::PrReciprocal | ChartKind::PrLog => {
            let (x0, x1) = widen(xs.0.min(0.0), xs.1);
            let (y0, y1) = widen(ys.0.min(0.0), ys.1);
            (x0, x1, y0, y1)
        }
    }
}

fn viewport(kind: ChartKind, curves: &[Curve], style: &ChartStyle) -> Viewport {
    let (x_min, x_max, y_min, y_max) = data_window(kind, curves);
    let (mut left, mut right) = (style.margin, style.width - style.margin);
    let (mut top, mut bottom) = (style.margin, style.height - style.margin);
    if style.equal_scale {
        let per_px = ((x_max - x_min) / (right - left)).max((y_max - y_min) / (bottom - top));
        let w = (x_max - x_min) / per_px;
        let h = (y_max - y_min) / per_px;
        left += ((right - left) - w) / 2.0;
        right = left + w;
        top += ((bottom - top) - h) / 2.0;
        bottom = top + h;
    }
    Viewport {
        x_min,
        x_max,
        y_min,
        y_max,
        left,
        right,
        top,
        bottom,
    }
}

/// Liang-Barsky clip of a segment to the data window.
fn clip(vp: &Viewport, a: (f64, f64), b: (f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    for (p, q) in [
        (-dx, a.0 - vp.x_min),
        (dx, vp.x_max - a.0),
        (-dy, a.1 - vp.y_min),
        (dy, vp.y_max - a.1),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then_some((
        (a.0 + t0 * dx, a.1 + t0 * dy),
        (a.0 + t1 * dx, a.1 + t1 * dy),
    ))
}

fn line_endpoints(vp: &Viewport, g: &LineGeometry) -> Option<((f64, f64), (f64, f64))> {
    let (a, b) = match *g {
        LineGeometry::Segment { from, to } => (from, to),
        LineGeometry::Vertical { x } => ((x, vp.y_min), (x, vp.y_max)),
        LineGeometry::Horizontal { y } => ((vp.x_min, y), (vp.x_max, y)),
        LineGeometry::Sloped { slope, intercept } => (
            (vp.x_min, slope * vp.x_min + intercept),
            (vp.x_max, slope * vp.x_max + intercept),
        ),
    };
    clip(vp, a, b)
}

fn px(v: f64) -> String {
    format_significant(v, DISPLAY_DIGITS)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}

fn truncate(name: &str) -> String {
    if name.chars().count() <= LEGEND_MAX_CHARS {
        name.to_string()
    } else {
        let mut s: String = name.chars().take(LEGEND_MAX_CHARS - 1).collect();
        s.push('\u{2026}');
        s
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(kind: ChartKind, axis_x: bool, v: f64) -> String {
    // Round away float noise such as 0.30000000000000004 before display.
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    if axis_x && kind == ChartKind::Bprd {
        format!("{}%", format_significant(v * 100.0, DISPLAY_DIGITS))
    } else {
        format_significant(v, DISPLAY_DIGITS)
    }
}

/// Renders same-kind curves, one polyline per class, with their reference
/// lines, axes and a legend. The document is a standalone SVG 1.1 file;
/// its `<metadata>` element records the data-to-pixel transform.
pub fn render_chart(
    curves: &[Curve],
    refs: &[ReferenceLine],
    style: &ChartStyle,
    class_names: &[String],
) -> Result<String> {
    let first = curves
        .first()
        .ok_or_else(|| Error::domain("no curves to render"))?;
    let kind = first.kind;
    if let Some(other) = curves.iter().find(|c| c.kind != kind) {
        return Err(Error::domain(format!(
            "cannot mix {kind} and {} curves in one chart",
            other.kind
        )));
    }
    let vp = viewport(kind, curves, style);
    let name_of = |c: usize| {
        class_names
            .get(c)
            .cloned()
            .unwrap_or_else(|| format!("class {c}"))
    };

    let mut svg = String::new();
    let w = &mut svg;
    writeln!(
        w,
        r##"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"##
    )
    .unwrap();
    writeln!(
        w,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}">"##,
        px(style.width),
        px(style.height)
    )
    .unwrap();
    writeln!(w, "<title>{kind}</title>").unwrap();
    writeln!(
        w,
        r##"<metadata id="viewport">{}</metadata>"##,
        vp.describe()
    )
    .unwrap();
    writeln!(
        w,
        r##"<defs><clipPath id="plot-area"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"##,
        px(vp.left),
        px(vp.top),
        px(vp.right - vp.left),
        px(vp.bottom - vp.top)
    )
    .unwrap();
    writeln!(
        w,
        r##"<rect class="background" x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        px(style.width),
        px(style.height)
    )
    .unwrap();

    // Axes, ticks and grid.
    writeln!(
        w,
        r##"<g class="axes" font-family="sans-serif" font-size="11" fill="#333333">"##
    )
    .unwrap();
    writeln!(
        w,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333333" stroke-width="1"/>"##,
        px(vp.left),
        px(vp.top),
        px(vp.right - vp.left),
        px(vp.bottom - vp.top)
    )
    .unwrap();
    for t in ticks(vp.x_min, vp.x_max) {
        let x = px(vp.px(t));
        writeln!(
            w,
            r##"<line class="tick" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#333333"/>"##,
            px(vp.bottom),
            px(vp.bottom + 5.0)
        )
        .unwrap();
        writeln!(
            w,
            r##"<text x="{x}" y="{}" text-anchor="middle">{}</text>"##,
            px(vp.bottom + 18.0),
            escape(&tick_label(kind, true, t))
        )
        .unwrap();
    }
    for t in ticks(vp.y_min, vp.y_max) {
        let y = px(vp.py(t));
        writeln!(
            w,
            r##"<line class="tick" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#333333"/>"##,
            px(vp.left - 5.0),
            px(vp.left)
        )
        .unwrap();
        writeln!(
            w,
            r##"<text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle">{}</text>"##,
            px(vp.left - 8.0),
            escape(&tick_label(kind, false, t))
        )
        .unwrap();
    }
    let (x_label, y_label) = kind.axis_labels();
    writeln!(
        w,
        r##"<text class="axis-label" x="{}" y="{}" text-anchor="middle">{}</text>"##,
        px((vp.left + vp.right) / 2.0),
        px(style.height - 12.0),
        escape(x_label)
    )
    .unwrap();
    writeln!(
        w,
        r##"<text class="axis-label" x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"##,
        px((vp.top + vp.bottom) / 2.0),
        escape(y_label)
    )
    .unwrap();
    writeln!(
        w,
        r##"<text class="chart-title" x="{}" y="{}" text-anchor="middle" font-size="14">{kind}</text>"##,
        px(style.width / 2.0),
        px(style.margin / 2.0)
    )
    .unwrap();
    writeln!(w, "</g>").unwrap();

    // Reference lines, identical ones drawn once.
    writeln!(
        w,
        r##"<g class="reference-lines" clip-path="url(#plot-area)">"##
    )
    .unwrap();
    let mut drawn: Vec<&ReferenceLine> = Vec::new();
    for line in refs {
        if drawn.contains(&line) {
            continue;
        }
        drawn.push(line);
        let Some((a, b)) = line_endpoints(&vp, &line.geometry) else {
            continue;
        };
        let (stroke, width, dash) = match (line.role, line.class_index) {
            (LineRole::Chance, None) => ("#404040".to_string(), 1.5, None),
            (LineRole::Chance, Some(c)) => (style.color(c).to_string(), 1.0, Some("2 2")),
            (LineRole::BreakEven, Some(c)) => (style.color(c).to_string(), 0.8, Some("5 3")),
            (LineRole::BreakEven, None) => ("#a0522d".to_string(), 1.2, None),
            (LineRole::Isobar, _) => ("#7fa7d9".to_string(), 0.8, None),
            (LineRole::Meridian, _) => ("#b0b0b0".to_string(), 0.8, None),
        };
        write!(
            w,
            r##"<line class="ref {}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}""##,
            line.role.name(),
            px(vp.px(a.0)),
            px(vp.py(a.1)),
            px(vp.px(b.0)),
            px(vp.py(b.1)),
            px(width)
        )
        .unwrap();
        if let Some(d) = dash {
            write!(w, r##" stroke-dasharray="{d}""##).unwrap();
        }
        writeln!(w, "/>").unwrap();
    }
    writeln!(w, "</g>").unwrap();

    // Curves in class order.
    let mut ordered: Vec<&Curve> = curves.iter().collect();
    ordered.sort_by_key(|c| c.class_index);
    writeln!(
        w,
        r##"<g class="curves" clip-path="url(#plot-area)" fill="none" stroke-width="1.8">"##
    )
    .unwrap();
    for curve in &ordered {
        let points: Vec<String> = curve
            .points
            .iter()
            .filter(|p| p.x.is_finite() && p.y.is_finite())
            .map(|p| format!("{},{}", px(vp.px(p.x)), px(vp.py(p.y))))
            .collect();
        writeln!(
            w,
            r##"<polyline class="curve" id="curve-{}" stroke="{}" points="{}"><title>{}</title></polyline>"##,
            curve.class_index,
            style.color(curve.class_index),
            points.join(" "),
            escape(&name_of(curve.class_index))
        )
        .unwrap();
    }
    writeln!(w, "</g>").unwrap();

    // Legend: class name and positive count, fixed line height.
    let legend_x = vp.right - 170.0;
    let legend_y = vp.top + 10.0;
    writeln!(
        w,
        r##"<g class="legend-box" font-family="sans-serif" font-size="11">"##
    )
    .unwrap();
    writeln!(
        w,
        r##"<rect x="{}" y="{}" width="160" height="{}" fill="#ffffff" fill-opacity="0.85" stroke="#999999"/>"##,
        px(legend_x),
        px(legend_y),
        px(ordered.len() as f64 * LEGEND_LINE_HEIGHT + 8.0)
    )
    .unwrap();
    for (row, curve) in ordered.iter().enumerate() {
        let y = legend_y + 4.0 + (row as f64 + 0.5) * LEGEND_LINE_HEIGHT;
        writeln!(
            w,
            r##"<line x1="{}" y1="{y1}" x2="{}" y2="{y1}" stroke="{}" stroke-width="2"/>"##,
            px(legend_x + 6.0),
            px(legend_x + 24.0),
            style.color(curve.class_index),
            y1 = px(y)
        )
        .unwrap();
        writeln!(
            w,
            r##"<text class="legend" x="{}" y="{}" dominant-baseline="middle">{} ({})</text>"##,
            px(legend_x + 30.0),
            px(y),
            escape(&truncate(&name_of(curve.class_index))),
            curve.rp
        )
        .unwrap();
    }
    writeln!(w, "</g>").unwrap();
    writeln!(w, "</svg>").unwrap();
    Ok(svg)
}
