//! Static SVG 1.1 line charts for sweep output.

use std::fmt::Write as _;

use crate::sweep::SweepRow;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 220.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 40.0;

/// A named column of y-values sharing the chart's x axis.
pub struct Series<'a> {
    pub name: &'a str,
    pub values: Vec<f64>,
}

/// Stacks one panel per series, each with its own y range. NaN samples
/// break the line.
pub fn chart(title: &str, x_name: &str, xs: &[f64], series: &[Series<'_>]) -> String {
    let height = MARGIN_TOP + PANEL_HEIGHT * series.len() as f64;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{}</text>"#, WIDTH / 2.0, escape(title));
    let (x_lo, x_hi) = range(xs.iter().copied());
    for (i, ser) in series.iter().enumerate() {
        let top = MARGIN_TOP + PANEL_HEIGHT * i as f64;
        panel(&mut s, top, x_name, xs, (x_lo, x_hi), ser);
    }
    s.push_str("</svg>\n");
    s
}

fn panel(s: &mut String, top: f64, x_name: &str, xs: &[f64], (x_lo, x_hi): (f64, f64), ser: &Series<'_>) {
    let (y_lo, y_hi) = range(ser.values.iter().copied());
    let left = MARGIN_LEFT;
    let right = WIDTH - MARGIN_RIGHT;
    let bottom = top + PANEL_HEIGHT - MARGIN_BOTTOM;
    let plot_top = top + 10.0;
    let px = |x: f64| left + (x - x_lo) / (x_hi - x_lo) * (right - left);
    let py = |y: f64| bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - plot_top);

    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{plot_top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - plot_top
    );
    for t in 0..=5 {
        let f = t as f64 / 5.0;
        let xv = x_lo + f * (x_hi - x_lo);
        let yv = y_lo + f * (y_hi - y_lo);
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{bottom}" x2="{0:.2}" y2="{1}" stroke="black"/><text x="{0:.2}" y="{2}" text-anchor="middle">{3}</text>"#,
            px(xv),
            bottom + 4.0,
            bottom + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{left}" y1="{0:.2}" x2="{1}" y2="{0:.2}" stroke="black"/><text x="{2}" y="{3:.2}" text-anchor="end">{4}</text>"#,
            py(yv),
            left - 4.0,
            left - 6.0,
            py(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (left + right) / 2.0, bottom + 32.0, escape(x_name));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        (plot_top + bottom) / 2.0,
        escape(ser.name)
    );

    let mut segment: Vec<String> = Vec::new();
    let flush = |seg: &mut Vec<String>, s: &mut String| {
        if seg.len() > 1 {
            let _ = writeln!(s, r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1.2" points="{}"/>"##, seg.join(" "));
        }
        seg.clear();
    };
    for (&x, &y) in xs.iter().zip(&ser.values) {
        if x.is_finite() && y.is_finite() {
            segment.push(format!("{:.2},{:.2}", px(x), py(y)));
        } else {
            flush(&mut segment, s);
        }
    }
    flush(&mut segment, s);
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * lo.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1.0);
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        let t = format!("{v:.4}");
        let t = t.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".to_string() } else { t.to_string() }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Reflection-side and transmission-side charts for a sweep.
pub fn sweep_charts(rows: &[SweepRow]) -> (String, String) {
    let xs: Vec<f64> = rows.iter().map(|r| r.theta_deg).collect();
    let col = |f: fn(&SweepRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let refl = chart(
        "reflected channel",
        "theta_deg",
        &xs,
        &[
            Series { name: "absR1sq", values: col(|r| r.abs_r1_sq) },
            Series { name: "ThetaR", values: col(|r| r.phase_r) },
            Series { name: "yR", values: col(|r| r.y_r) },
        ],
    );
    let trans = chart(
        "transmitted channel",
        "theta_deg",
        &xs,
        &[
            Series { name: "absT1sq", values: col(|r| r.abs_t1_sq) },
            Series { name: "ThetaT", values: col(|r| r.phase_t) },
            Series { name: "yT", values: col(|r| r.y_t) },
        ],
    );
    (refl, trans)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_breaks_line() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let svg = chart("t", "x", &xs, &[Series { name: "y", values: vec![0.0, 1.0, f64::NAN, 2.0, 3.0] }]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn flat_series_gets_a_range() {
        assert_eq!(range([2.0, 2.0].into_iter()), (1.0, 3.0));
        assert_eq!(range([f64::NAN].into_iter()), (0.0, 1.0));
    }
}
