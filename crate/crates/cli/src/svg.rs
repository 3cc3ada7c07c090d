//! Minimal overlay plots: axes plus one polyline per series.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub(crate) struct Series<'a> {
    pub label: &'a str,
    pub ys: &'a [f64],
}

pub(crate) fn plot(title: &str, xs: &[f64], series: &[Series<'_>]) -> String {
    let finite = |v: &&f64| v.is_finite();
    let (x_lo, x_hi) = bounds(xs.iter().filter(finite).copied());
    let (y_lo, y_hi) = bounds(
        series
            .iter()
            .flat_map(|s| s.ys.iter().filter(finite).copied()),
    );
    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(title)
    );
    let (left, right, bottom, top) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>"#
    );
    for (value, anchor, x, y) in [
        (x_lo, "start", left, bottom + 16.0),
        (x_hi, "end", right, bottom + 16.0),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{value:.3}</text>"#
        );
    }
    for (value, y) in [(y_lo, bottom), (y_hi, top + 10.0)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="11">{value:.3}</text>"#,
            left - 4.0
        );
    }
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(s.ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            right,
            top + 14.0 * (i as f64 + 1.0),
            escape(s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
