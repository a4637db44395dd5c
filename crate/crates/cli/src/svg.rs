//! Static SVG renderings: line/marker plots and Hasse diagrams.

use std::fmt::Write as _;

use clusterlin::poset::{added_elements, build, ClusterParams};
use clusterlin::{Label, Variant};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;
const PURPLE: &str = "#8e44ad";

pub enum Style {
    Line,
    Markers,
}

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
    pub color: &'static str,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

impl Plot {
    pub fn render(&self) -> String {
        let all = || self.series.iter().flat_map(|s| s.points.iter());
        let (x0, x1) = bounds(all().map(|p| p.0));
        let (y0, y1) = bounds(all().map(|p| p.1));
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            out,
            r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            right - left,
            bottom - top
        );
        for k in 0..=4 {
            let fx = x0 + (x1 - x0) * k as f64 / 4.0;
            let fy = y0 + (y1 - y0) * k as f64 / 4.0;
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                sx(fx),
                bottom + 16.0,
                tick(fx)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                left - 6.0,
                sy(fy) + 4.0,
                tick(fy)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for (k, s) in self.series.iter().enumerate() {
            let pts: Vec<(f64, f64)> =
                s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).map(|&(x, y)| (sx(x), sy(y))).collect();
            match s.style {
                Style::Line => {
                    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                        s.color,
                        path.join(" ")
                    );
                }
                Style::Markers => {
                    for (x, y) in pts {
                        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{}"/>"#, s.color);
                    }
                }
            }
            let ly = top + 16.0 + 16.0 * k as f64;
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{ly:.1}" fill="{}">{}</text>"#,
                left + 8.0,
                s.color,
                escape(&s.name)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Hasse diagram with `A(i,j)` placed in column `i` at level `(i-1)(b-a) + j`.
pub fn hasse(params: &ClusterParams, variant: Variant) -> String {
    let poset = build(params, variant);
    let added = if variant == Variant::Q { added_elements(params, &poset) } else { Vec::new() };
    let d = params.d() as f64;
    let place = |x: usize| match poset.label(x) {
        Label::Cluster { chain, pos } => (chain as f64, (chain as f64 - 1.0) * d + pos as f64),
        Label::Plain(k) => (0.0, k as f64),
    };
    let coords: Vec<(f64, f64)> = (0..poset.len()).map(place).collect();
    let (cx0, cx1) = bounds(coords.iter().map(|c| c.0));
    let (cy0, cy1) = bounds(coords.iter().map(|c| c.1));
    let step = 36.0;
    let width = ((cx1 - cx0) * 2.0 * step).max(120.0) + 2.0 * MARGIN;
    let height = (cy1 - cy0) * step + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - cx0) * 2.0 * step;
    let py = |y: f64| height - MARGIN - (y - cy0) * step;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="13">{}_{}^({},{},{})</text>"#,
        width / 2.0,
        variant,
        params.n,
        params.m,
        params.a,
        params.b
    );
    for (x, y) in poset.covers() {
        let new = added.contains(&x) || added.contains(&y);
        let (color, dash) = if new { (PURPLE, r#" stroke-dasharray="4 3""#) } else { ("black", "") };
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}"{dash}/>"#,
            px(coords[x].0),
            py(coords[x].1),
            px(coords[y].0),
            py(coords[y].1)
        );
    }
    for (x, &(cx, cy)) in coords.iter().enumerate() {
        let color = if added.contains(&x) { PURPLE } else { "black" };
        let _ = writeln!(out, r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="{color}"/>"#, px(cx), py(cy));
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
            px(cx) + 7.0,
            py(cy) + 3.0,
            poset.label(x)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_well_formed() {
        let plot = Plot {
            title: "a < b".into(),
            x_label: "t".into(),
            y_label: "f".into(),
            series: vec![Series {
                name: "f".into(),
                points: vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)],
                style: Style::Line,
                color: "black",
            }],
        };
        let svg = plot.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn hasse_marks_added_elements() {
        let params = ClusterParams::new(8, 3, 5, 2).unwrap();
        let p = hasse(&params, Variant::P);
        let q = hasse(&params, Variant::Q);
        assert_eq!(p.matches("<circle").count(), params.p_size());
        assert_eq!(q.matches("<circle").count(), params.q_size());
        assert!(!p.contains(PURPLE));
        assert_eq!(q.matches(&format!(r#"r="4" fill="{PURPLE}""#)).count(), params.q_size() - params.p_size());
    }
}
