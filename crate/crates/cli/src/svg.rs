//! Minimal SVG line plots.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn tr(v: f64, log: bool) -> Option<f64> {
    let v = if log { v.log10() } else { v };
    v.is_finite().then_some(v)
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

fn fmt_tick(v: f64, log: bool) -> String {
    if log {
        format!("1e{v:.1}")
    } else {
        format!("{v:.3e}")
    }
}

impl Plot {
    pub fn render(&self) -> String {
        let pts: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| {
                s.points
                    .iter()
                    .filter_map(|&(x, y)| Some((tr(x, self.log_x)?, tr(y, self.log_y)?)))
                    .collect()
            })
            .collect();
        let (x0, x1) = bounds(pts.iter().flatten().map(|p| p.0));
        let (y0, y1) = bounds(pts.iter().flatten().map(|p| p.1));
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
        let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            W / 2.0,
            escape(&self.title)
        )
        .unwrap();
        // Axes.
        writeln!(
            s,
            r#"<polyline points="{m},{t} {m},{b} {r},{b}" fill="none" stroke="black"/>"#,
            m = MARGIN,
            t = MARGIN,
            b = H - MARGIN,
            r = W - MARGIN
        )
        .unwrap();
        for (v, anchor, x, y) in [
            (x0, "start", MARGIN, H - MARGIN + 16.0),
            (x1, "end", W - MARGIN, H - MARGIN + 16.0),
        ] {
            writeln!(
                s,
                r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#,
                fmt_tick(v, self.log_x)
            )
            .unwrap();
        }
        for (v, y) in [(y0, H - MARGIN), (y1, MARGIN + 4.0)] {
            writeln!(
                s,
                r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#,
                MARGIN - 4.0,
                fmt_tick(v, self.log_y)
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            W / 2.0,
            H - 16.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            H / 2.0,
            H / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        for (i, (series, p)) in self.series.iter().zip(&pts).enumerate() {
            let color = COLORS[i % COLORS.len()];
            let coords: Vec<String> = p
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                coords.join(" ")
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
                W - MARGIN + 4.0,
                MARGIN + 16.0 * i as f64,
                escape(&series.label)
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
