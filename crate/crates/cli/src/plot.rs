//! Minimal SVG line plots. CSV stays the source of truth; these are for a quick look.

use std::fmt::Write as _;

const W: f64 = 800.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Cap on points per series so long traces stay small on disk.
const MAX_POINTS: usize = 2000;

fn span(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

pub fn line_plot(title: &str, t: &[f64], series: &[(&str, &[f64])]) -> String {
    let (t0, t1) = span(t.iter().copied());
    let (y0, y1) = span(series.iter().flat_map(|(_, y)| y.iter().copied()));
    let sx = |v: f64| PAD + (v - t0) / (t1 - t0) * (W - 2.0 * PAD);
    let sy = |v: f64| H - PAD - (v - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let stride = (t.len() / MAX_POINTS).max(1);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    if y0 < 0.0 && y1 > 0.0 {
        let z = sy(0.0);
        let _ = writeln!(s, r##"<line x1="{PAD}" y1="{z:.2}" x2="{}" y2="{z:.2}" stroke="#bbb"/>"##, W - PAD);
    }
    let _ = writeln!(s, r#"<text x="{PAD}" y="{}">{t0:.3}</text>"#, H - PAD + 15.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">t = {t1:.3}</text>"#, W - PAD, H - PAD + 15.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{y1:.4}</text>"#, PAD - 4.0, PAD + 4.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{y0:.4}</text>"#, PAD - 4.0, H - PAD);

    for (k, (name, y)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = t
            .iter()
            .zip(y.iter())
            .step_by(stride)
            .filter(|(_, v)| v.is_finite())
            .map(|(&t, &v)| format!("{:.2},{:.2}", sx(t), sy(v)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = PAD + 15.0 + 15.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}" text-anchor="end">{}</text>"#,
            W - PAD - 5.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formed_and_bounded() {
        let t: Vec<f64> = (0..10_000).map(|k| k as f64 * 1e-3).collect();
        let y: Vec<f64> = t.iter().map(|t| t.sin()).collect();
        let svg = line_plot("a<b", &t, &[("sin", &y)]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a&lt;b"));
        let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert!(pts.split(' ').count() <= MAX_POINTS + 1);
    }

    #[test]
    fn flat_series_does_not_divide_by_zero() {
        let svg = line_plot("flat", &[0.0, 1.0], &[("c", &[2.0, 2.0])]);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
