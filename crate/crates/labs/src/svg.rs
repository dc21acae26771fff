//! Minimal SVG charts.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const M: f64 = 50.0;

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-9 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12"><rect width="{W}" height="{H}" fill="white"/><text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn axes(s: &mut String, x_label: &str, y_label: &str, y: (f64, f64)) {
    let _ = write!(
        s,
        r#"<line x1="{M}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{M}" y1="{M}" x2="{M}" y2="{}" stroke="black"/><text x="{}" y="{}" text-anchor="middle">{}</text><text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">{}</text><text x="{}" y="{}" text-anchor="end">{:.4}</text><text x="{}" y="{}" text-anchor="end">{:.4}</text>"#,
        H - M,
        W - M,
        H - M,
        H - M,
        W / 2.0,
        H - 12.0,
        escape(x_label),
        H / 2.0,
        H / 2.0,
        escape(y_label),
        M - 4.0,
        H - M,
        y.0,
        M - 4.0,
        M + 4.0,
        y.1
    );
}

fn map(v: f64, (lo, hi): (f64, f64), a: f64, b: f64) -> f64 {
    a + (v - lo) / (hi - lo) * (b - a)
}

/// One vertical bar per label spanning its interval, with an optional
/// shaded target band.
pub fn interval_chart(
    title: &str,
    labels: &[String],
    intervals: &[(f64, f64)],
    band: Option<(f64, f64)>,
) -> String {
    let finite = |v: f64| if v.is_finite() { Some(v) } else { None };
    let mut ys: Vec<f64> = intervals
        .iter()
        .flat_map(|&(a, b)| [finite(a), finite(b)])
        .flatten()
        .collect();
    if let Some((a, b)) = band {
        ys.extend([a, b]);
    }
    let y = span(ys.into_iter());
    let mut s = header(title);
    axes(&mut s, "step", "value", y);
    if let Some((a, b)) = band {
        let (top, bottom) = (map(b, y, H - M, M), map(a, y, H - M, M));
        let _ = write!(
            s,
            r##"<rect x="{M}" y="{top}" width="{}" height="{}" fill="#2ca02c" opacity="0.15"/>"##,
            W - 2.0 * M,
            bottom - top
        );
    }
    let n = intervals.len().max(1) as f64;
    let slot = (W - 2.0 * M) / n;
    for (i, &(lo, hi)) in intervals.iter().enumerate() {
        let x = M + slot * (i as f64 + 0.5);
        let top = map(if hi.is_finite() { hi } else { y.1 }, y, H - M, M);
        let bottom = map(if lo.is_finite() { lo } else { y.0 }, y, H - M, M);
        let _ = write!(
            s,
            r##"<rect x="{}" y="{top}" width="{}" height="{}" fill="#1f77b4" opacity="0.7"/>"##,
            x - slot * 0.3,
            slot * 0.6,
            (bottom - top).max(1.0)
        );
        if let Some(label) = labels.get(i) {
            let _ = write!(
                s,
                r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
                H - M + 16.0,
                escape(label)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Scatter plot of named, colored series.
pub fn scatter(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(&str, &str, &[(f64, f64)])],
) -> String {
    let x = span(
        series
            .iter()
            .flat_map(|(_, _, pts)| pts.iter().map(|p| p.0)),
    );
    let y = span(
        series
            .iter()
            .flat_map(|(_, _, pts)| pts.iter().map(|p| p.1)),
    );
    let mut s = header(title);
    axes(&mut s, x_label, y_label, y);
    for (k, (name, color, pts)) in series.iter().enumerate() {
        for &(px, py) in pts.iter() {
            let _ = write!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}" opacity="0.8"/>"#,
                map(px, x, M, W - M),
                map(py, y, H - M, M)
            );
        }
        let _ = write!(
            s,
            r#"<circle cx="{}" cy="{}" r="4" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
            W - M - 60.0,
            M + 16.0 * k as f64,
            W - M - 50.0,
            M + 4.0 + 16.0 * k as f64,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}
