//! Minimal SVG renderings of the CSV tables. The plots are a convenience;
//! the CSV files carry the data.

use std::fmt::Write as _;

use faer::Mat;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 7] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

#[derive(Debug, Clone, Copy)]
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn open(title: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, WIDTH / 2.0).unwrap();
    s
}

fn axes(s: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    writeln!(s, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, r - l, b - t).unwrap();
    for (value, anchor, x, y) in [
        (frame.x.0, "start", l, b + 16.0),
        (frame.x.1, "end", r, b + 16.0),
        (frame.y.0, "end", l - 4.0, b),
        (frame.y.1, "end", l - 4.0, t + 10.0),
    ] {
        writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{value:.3}</text>"#).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, WIDTH / 2.0, HEIGHT - 16.0).unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{y_label}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    )
    .unwrap();
}

/// One polyline per series. With `log_y`, non-positive values are dropped.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[(&str, &[f64], &[f64])], log_y: bool) -> String {
    let transform = |y: f64| if log_y { y.log10() } else { y };
    let keep = |y: f64| !log_y || y > 0.0;
    let frame = Frame {
        x: bounds(series.iter().flat_map(|s| s.1.iter().copied())),
        y: bounds(series.iter().flat_map(|s| s.2.iter().copied().filter(|&y| keep(y)).map(transform))),
    };
    let mut s = open(title);
    for (k, (name, xs, ys)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(ys.iter())
            .filter(|(_, &y)| keep(y) && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", frame.px(x), frame.py(transform(y))))
            .collect();
        writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, points.join(" ")).unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            WIDTH - MARGIN + 6.0,
            MARGIN + 14.0 * (k as f64 + 1.0)
        )
        .unwrap();
    }
    let y_label = if log_y { format!("log10 {y_label}") } else { y_label.to_string() };
    axes(&mut s, &frame, x_label, &y_label);
    s.push_str("</svg>\n");
    s
}

/// Scatter plot clipped to `y_range`, with an optional shaded band.
pub fn scatter_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[(f64, f64)],
    y_range: (f64, f64),
    band: Option<(f64, f64)>,
) -> String {
    let frame = Frame {
        x: bounds(points.iter().map(|p| p.0)),
        y: y_range,
    };
    let mut s = open(title);
    if let Some((lo, hi)) = band {
        let (top, bottom) = (frame.py(hi.min(y_range.1)), frame.py(lo.max(y_range.0)));
        writeln!(
            s,
            r##"<rect x="{MARGIN}" y="{top:.2}" width="{}" height="{:.2}" fill="#dddddd"/>"##,
            WIDTH - 2.0 * MARGIN,
            bottom - top
        )
        .unwrap();
    }
    for &(x, y) in points.iter().filter(|p| p.1 >= y_range.0 && p.1 <= y_range.1) {
        writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="0.8"/>"#, frame.px(x), frame.py(y)).unwrap();
    }
    axes(&mut s, &frame, x_label, y_label);
    s.push_str("</svg>\n");
    s
}

/// Grey-scale map of `values[(i, j)]` at `(xs[i], ys[j])`, darkest at the
/// maximum.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64], values: &Mat<f64>) -> String {
    let frame = Frame {
        x: bounds(xs.iter().copied()),
        y: bounds(ys.iter().copied()),
    };
    let (lo, hi) = bounds((0..values.nrows()).flat_map(|i| (0..values.ncols()).map(move |j| values[(i, j)])));
    let cell_w = (WIDTH - 2.0 * MARGIN) / xs.len().max(1) as f64;
    let cell_h = (HEIGHT - 2.0 * MARGIN) / ys.len().max(1) as f64;
    let mut s = open(title);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let level = ((values[(i, j)] - lo) / (hi - lo)).clamp(0.0, 1.0);
            let shade = (255.0 * (1.0 - level)).round() as u8;
            if shade == 255 {
                continue;
            }
            writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},{shade})"/>"#,
                frame.px(x) - cell_w / 2.0,
                frame.py(y) - cell_h / 2.0,
                cell_w,
                cell_h
            )
            .unwrap();
        }
    }
    axes(&mut s, &frame, x_label, y_label);
    s.push_str("</svg>\n");
    s
}
