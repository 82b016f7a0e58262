//! Two-panel SVG figures: the disk picture and the traced polygon.

use std::fmt::Write;

use num_complex::Complex64;
use sc_blaschke::scmap::{PolygonTrace, TraceVertex};
use sc_blaschke::{MapSpec, PrevertexSet, VertexLabel};

const PANEL: f64 = 400.0;
const MARGIN: f64 = 24.0;
const CONVEX_COLOR: &str = "#1b7837";
const CONCAVE_COLOR: &str = "#c51b7d";
const B1_COLOR: &str = "#2166ac";
const B2_COLOR: &str = "#b2182b";

/// Axis-aligned box in the image plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewBox {
    pub min: Complex64,
    pub max: Complex64,
}

impl ViewBox {
    fn contains(&self, z: Complex64) -> bool {
        z.re >= self.min.re && z.re <= self.max.re && z.im >= self.min.im && z.im <= self.max.im
    }

    /// Clips the segment `[a, b]` (Liang-Barsky).
    pub fn clip(&self, a: Complex64, b: Complex64) -> Option<(Complex64, Complex64)> {
        let d = b - a;
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        let edges = [
            (-d.re, a.re - self.min.re),
            (d.re, self.max.re - a.re),
            (-d.im, a.im - self.min.im),
            (d.im, self.max.im - a.im),
        ];
        for (p, q) in edges {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
                continue;
            }
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
            if t0 > t1 {
                return None;
            }
        }
        Some((a + d * t0, a + d * t1))
    }
}

/// A square box around the finite vertices, grown to show a fair part of any
/// ray edges.
pub fn polygon_box(trace: &PolygonTrace) -> ViewBox {
    let finite = trace.finite_positions();
    let all: Vec<Complex64> = trace
        .edges
        .iter()
        .flat_map(|e| e.points.iter().copied())
        .filter(|z| z.is_finite())
        .collect();
    let center = if finite.is_empty() {
        median_point(&all)
    } else {
        finite.iter().sum::<Complex64>() / finite.len() as f64
    };
    let spread = |pts: &[Complex64]| pts.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    let mut half = 1.2 * spread(&finite);
    let mut dists: Vec<f64> = all.iter().map(|z| (z - center).norm()).collect();
    dists.sort_by(f64::total_cmp);
    if let Some(&d) = dists.get(dists.len() / 2) {
        half = half.max(d);
    }
    if !(half > 0.0) {
        half = 1.0;
    }
    let h = Complex64::new(half, half);
    ViewBox {
        min: center - h,
        max: center + h,
    }
}

fn median_point(pts: &[Complex64]) -> Complex64 {
    if pts.is_empty() {
        return Complex64::default();
    }
    let mut re: Vec<f64> = pts.iter().map(|z| z.re).collect();
    let mut im: Vec<f64> = pts.iter().map(|z| z.im).collect();
    re.sort_by(f64::total_cmp);
    im.sort_by(f64::total_cmp);
    Complex64::new(re[re.len() / 2], im[im.len() / 2])
}

/// Maps a box onto a panel with its left edge at `x0`, keeping the aspect ratio.
struct Frame {
    view: ViewBox,
    x0: f64,
}

impl Frame {
    fn px(&self, z: Complex64) -> (f64, f64) {
        let w = PANEL - 2.0 * MARGIN;
        let span = (self.view.max.re - self.view.min.re).max(self.view.max.im - self.view.min.im);
        let s = w / span;
        (
            self.x0 + MARGIN + (z.re - self.view.min.re) * s,
            MARGIN + (self.view.max.im - z.im) * s,
        )
    }
}

fn label_color(label: VertexLabel) -> &'static str {
    match label {
        VertexLabel::Convex => CONVEX_COLOR,
        VertexLabel::Concave => CONCAVE_COLOR,
    }
}

fn disk_panel(out: &mut String, spec: &MapSpec, set: Option<&PrevertexSet>) {
    let one = Complex64::new(1.1, 1.1);
    let f = Frame {
        view: ViewBox {
            min: -one,
            max: one,
        },
        x0: 0.0,
    };
    let (cx, cy) = f.px(Complex64::default());
    let (ex, _) = f.px(Complex64::new(1.0, 0.0));
    let _ = writeln!(
        out,
        r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="black" stroke-width="1"/>"#,
        ex - cx
    );
    for z in spec.b1().zero_values() {
        let (x, y) = f.px(z);
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{B1_COLOR}"><title>B1 zero</title></circle>"#
        );
    }
    for z in spec.b2().zero_values() {
        let (x, y) = f.px(z);
        let _ = writeln!(
            out,
            r#"<path d="M{:.3},{:.3}L{:.3},{:.3}M{:.3},{:.3}L{:.3},{:.3}" stroke="{B2_COLOR}" stroke-width="2"><title>B2 zero</title></path>"#,
            x - 4.0,
            y - 4.0,
            x + 4.0,
            y + 4.0,
            x - 4.0,
            y + 4.0,
            x + 4.0,
            y - 4.0
        );
    }
    if let Some(set) = set {
        for p in set.points() {
            let (x, y) = f.px(p.z.value());
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="5" fill="{}" stroke="black" stroke-width="0.5"><title>t={:.6} beta={:.6}</title></circle>"#,
                label_color(p.label),
                p.t,
                p.beta
            );
        }
    }
}

fn polygon_panel(
    out: &mut String,
    set: Option<&PrevertexSet>,
    trace: Option<&PolygonTrace>,
    message: Option<&str>,
) {
    let x0 = PANEL;
    let _ = writeln!(
        out,
        r#"<rect x="{:.3}" y="{MARGIN}" width="{:.3}" height="{:.3}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#,
        x0 + MARGIN,
        PANEL - 2.0 * MARGIN,
        PANEL - 2.0 * MARGIN
    );
    let Some(trace) = trace else {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            x0 + PANEL / 2.0,
            PANEL / 2.0,
            message.unwrap_or("no polygon")
        );
        return;
    };
    let view = polygon_box(trace);
    let f = Frame { view, x0 };
    for edge in &trace.edges {
        let mut d = String::new();
        let mut pen_down = false;
        for w in edge.points.windows(2) {
            match view.clip(w[0], w[1]) {
                Some((a, b)) => {
                    let (ax, ay) = f.px(a);
                    let (bx, by) = f.px(b);
                    if !pen_down || !view.contains(w[0]) {
                        let _ = write!(d, "M{ax:.3},{ay:.3}");
                    }
                    let _ = write!(d, "L{bx:.3},{by:.3}");
                    pen_down = view.contains(w[1]);
                }
                None => pen_down = false,
            }
        }
        if !d.is_empty() {
            let _ = writeln!(
                out,
                r#"<path d="{d}" fill="none" stroke="black" stroke-width="1.5"/>"#
            );
        }
    }
    for (k, v) in trace.vertices.iter().enumerate() {
        if let TraceVertex::Finite { position, .. } = v {
            if !view.contains(*position) {
                continue;
            }
            let (x, y) = f.px(*position);
            let color = set.map_or("black", |s| label_color(s.points()[k].label));
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{color}"/>"#
            );
        }
    }
}

/// Renders both panels. `message` is shown in place of a missing trace.
pub fn render(
    spec: &MapSpec,
    set: Option<&PrevertexSet>,
    trace: Option<&PolygonTrace>,
    message: Option<&str>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{PANEL}" viewBox="0 0 {w} {PANEL}">"#,
        w = 2.0 * PANEL
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    disk_panel(&mut out, spec, set);
    polygon_panel(&mut out, set, trace, message);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use sc_blaschke::scmap::trace_polygon;
    use sc_blaschke::{solve_prevertices, BlaschkeProduct, DEFAULT_TOL};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn clipping() {
        let v = ViewBox {
            min: c(-1.0, -1.0),
            max: c(1.0, 1.0),
        };
        let (a, b) = v.clip(c(0.0, 0.0), c(4.0, 0.0)).unwrap();
        assert_eq!((a, b), (c(0.0, 0.0), c(1.0, 0.0)));
        assert_eq!(v.clip(c(2.0, 2.0), c(3.0, 5.0)), None);
        let (a, b) = v.clip(c(-3.0, 0.5), c(3.0, 0.5)).unwrap();
        assert_eq!((a.re, b.re), (-1.0, 1.0));
    }

    #[test]
    fn koebe_figure() {
        let b2 = BlaschkeProduct::from_zeros(0.0, &[c(-0.5, 0.0)]).unwrap();
        let spec = MapSpec::interior(BlaschkeProduct::identity(), b2).unwrap();
        let set = solve_prevertices(&spec, DEFAULT_TOL).unwrap();
        let trace = trace_polygon(&set, c(1.0, 0.0), 32).unwrap();
        let svg = render(&spec, Some(&set), Some(&trace), None);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(
            svg.contains(B2_COLOR) && svg.contains(CONCAVE_COLOR) && svg.contains(CONVEX_COLOR)
        );
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        // every coordinate stays inside the two panels
        let mut body = svg.split_once('\n').unwrap().1.to_string();
        for color in [CONVEX_COLOR, CONCAVE_COLOR, B1_COLOR, B2_COLOR] {
            body = body.replace(color, "");
        }
        let nums = body
            .split(|ch: char| !(ch.is_ascii_digit() || ch == '.' || ch == '-'))
            .filter_map(|s| s.parse::<f64>().ok());
        let bad: Vec<f64> = nums
            .filter(|x| !(-1.0..=2.0 * PANEL + 1.0).contains(x))
            .collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
}
