//! SVG drawing of a multicurve on the twice-punctured disk.
//!
//! The layout is fixed: the U-puncture sits on the left, the Q-puncture on the
//! right and the arc between them is a vertical segment with one point per
//! generator. U-arcs bulge to the left of the arc; the elementary word of `P`
//! runs through a band to the right of it, and Q-arcs leave the far side of
//! the band. All coordinates are printed with one decimal so output is
//! byte-stable.

use std::fmt::Write;

use iotacurve::matching::{Matching, Status};
use iotacurve::precurve::{ElementaryMove, End, Multicurve};

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    pub row_gap: f64,
    pub column_gap: f64,
    pub face_width: f64,
    pub margin: f64,
    pub labels: bool,
    pub title: Option<String>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { row_gap: 36.0, column_gap: 24.0, face_width: 140.0, margin: 24.0, labels: true, title: None }
    }
}

const STROKE: &str = "#1f3a93";
const ARC: &str = "#888888";

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

struct Layout {
    n: usize,
    row_gap: f64,
    top: f64,
    u_punct: f64,
    arc_x: f64,
    band_end: f64,
    q_punct: f64,
    width: f64,
    disk_bottom: f64,
}

impl Layout {
    fn y(&self, i: usize) -> f64 {
        self.top + self.row_gap * i as f64
    }

    fn mid(&self) -> f64 {
        self.top + self.row_gap * (self.n.max(1) - 1) as f64 / 2.0
    }
}

fn layout(n: usize, word_len: usize, o: &RenderOptions) -> Layout {
    let left = o.margin;
    let u_punct = left + 40.0;
    let arc_x = u_punct + o.face_width;
    let band_end = arc_x + o.column_gap * (word_len + 1) as f64;
    let q_punct = band_end + o.face_width;
    let width = q_punct + 40.0 + o.margin;
    let top = o.margin + 48.0;
    let disk_bottom = top + o.row_gap * n.max(1) as f64 + 24.0;
    Layout { n, row_gap: o.row_gap, top, u_punct, arc_x, band_end, q_punct, width, disk_bottom }
}

fn face_statuses(m: &iotacurve::linalg::PolyMat) -> Vec<Status> {
    Matching::from_matrix(m).map(|mm| mm.statuses()).unwrap_or_else(|| vec![Status::Free; m.nrows()])
}

/// An arc between two points on a vertical line; the sign of `depth` picks the side.
fn face_arc(out: &mut String, x: f64, y1: f64, y2: f64, depth: f64, len: u32, labels: bool) {
    let cx = x + depth;
    writeln!(
        out,
        r#"  <path d="M {:.1} {:.1} C {:.1} {:.1} {:.1} {:.1} {:.1} {:.1}" fill="none" stroke="{}" stroke-width="2"/>"#,
        x, y1, cx, y1, cx, y2, x, y2, STROKE
    )
    .unwrap();
    if labels {
        let lx = x + depth * 0.75 + depth.signum() * 12.0;
        let ly = (y1 + y2) / 2.0 + 4.0;
        writeln!(out, r#"  <text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#, lx, ly, len).unwrap();
    }
}

fn to_puncture(out: &mut String, x: f64, y: f64, px: f64, py: f64) {
    writeln!(
        out,
        r#"  <path d="M {:.1} {:.1} C {:.1} {:.1} {:.1} {:.1} {:.1} {:.1}" fill="none" stroke="{}" stroke-width="2"/>"#,
        x,
        y,
        (x + px) / 2.0,
        y,
        (x + px) / 2.0,
        py,
        px,
        py,
        STROKE
    )
    .unwrap();
}

fn end_name(e: End) -> &'static str {
    match e {
        End::UPuncture => "U",
        End::QPuncture => "Q",
        End::Closed => "closed",
    }
}

pub fn render_svg(mc: &Multicurve, o: &RenderOptions) -> String {
    let pc = &mc.precurve;
    let n = pc.len();
    let word = &pc.pword;
    let l = layout(n, word.len(), o);
    let legend_top = l.disk_bottom + 24.0;
    let height = legend_top + 18.0 * mc.components.len() as f64 + o.margin;
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.1}" height="{:.1}" viewBox="0 0 {:.1} {:.1}" font-family="sans-serif">"#,
        l.width, height, l.width, height
    )
    .unwrap();
    writeln!(
        s,
        "  <defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"4\" orient=\"auto\"><path d=\"M 0 0 L 8 4 L 0 8 z\" fill=\"{}\"/></marker></defs>",
        STROKE
    )
    .unwrap();
    if let Some(t) = &o.title {
        writeln!(s, r#"  <text x="{:.1}" y="{:.1}" font-size="14">{}</text>"#, o.margin, o.margin + 14.0, esc(t)).unwrap();
    }
    // Disk and punctures.
    let disk_top = o.margin + 24.0;
    writeln!(
        s,
        r##"  <rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" rx="32.0" fill="#fbfbf7" stroke="#333333" stroke-width="1.5"/>"##,
        o.margin,
        disk_top,
        l.width - 2.0 * o.margin,
        l.disk_bottom - disk_top
    )
    .unwrap();
    let my = l.mid();
    for (x, name) in [(l.u_punct, "U"), (l.q_punct, "Q")] {
        writeln!(s, r##"  <circle cx="{:.1}" cy="{:.1}" r="6.0" fill="#333333"/>"##, x, my).unwrap();
        writeln!(s, r#"  <text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{}</text>"#, x, my - 12.0, name).unwrap();
    }
    if n > 0 {
        writeln!(
            s,
            r#"  <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{}" stroke-dasharray="4 3"/>"#,
            l.arc_x,
            l.y(0) - l.row_gap / 2.0,
            l.arc_x,
            l.y(n - 1) + l.row_gap / 2.0,
            ARC
        )
        .unwrap();
    }
    // U face, left of the arc.
    for (i, st) in face_statuses(&pc.du).iter().enumerate() {
        match *st {
            Status::Free => to_puncture(&mut s, l.arc_x, l.y(i), l.u_punct, my),
            Status::Source { partner, len } => {
                let depth = 28.0 + 14.0 * i.abs_diff(partner) as f64 + 10.0 * (len - 1) as f64;
                face_arc(&mut s, l.arc_x, l.y(i), l.y(partner), -depth.min(o.face_width - 20.0), len, o.labels);
            }
            Status::Target { .. } => {}
        }
    }
    // The word of P, one column per elementary move.
    let half = o.column_gap / 2.0;
    let mut x = l.arc_x;
    for t in 0..n {
        writeln!(s, r#"  <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{}" stroke-width="2"/>"#, x, l.y(t), x + half, l.y(t), STROKE).unwrap();
    }
    x += half;
    for mv in word {
        let x2 = x + o.column_gap;
        for t in 0..n {
            let (ya, yb) = match *mv {
                ElementaryMove::Crossing { i } if t == i => (l.y(i), l.y(i + 1)),
                ElementaryMove::Crossing { i } if t == i + 1 => (l.y(i + 1), l.y(i)),
                _ => (l.y(t), l.y(t)),
            };
            writeln!(s, r#"  <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{}" stroke-width="2"/>"#, x, ya, x2, yb, STROKE).unwrap();
        }
        if let ElementaryMove::Crossover { from, to } = *mv {
            let xm = x + half;
            let (y1, y2) = (l.y(from), l.y(to));
            let y2 = if y2 > y1 { y2 - 5.0 } else { y2 + 5.0 };
            writeln!(
                s,
                r##"  <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#c0392b" stroke-width="1.5" marker-end="url(#head)"/>"##,
                xm, y1, xm, y2
            )
            .unwrap();
        }
        x = x2;
    }
    for t in 0..n {
        writeln!(s, r#"  <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{}" stroke-width="2"/>"#, x, l.y(t), l.band_end, l.y(t), STROKE).unwrap();
    }
    // Q face, right of the band.
    for (i, st) in face_statuses(&pc.dq).iter().enumerate() {
        match *st {
            Status::Free => to_puncture(&mut s, l.band_end, l.y(i), l.q_punct, my),
            Status::Source { partner, len } => {
                let depth = 28.0 + 14.0 * i.abs_diff(partner) as f64 + 10.0 * (len - 1) as f64;
                face_arc(&mut s, l.band_end, l.y(i), l.y(partner), depth.min(o.face_width - 20.0), len, o.labels);
            }
            Status::Target { .. } => {}
        }
    }
    // Generator points last so they sit on top of the strands.
    for i in 0..n {
        writeln!(s, r##"  <circle cx="{:.1}" cy="{:.1}" r="3.5" fill="#000000"/>"##, l.arc_x, l.y(i)).unwrap();
        if o.labels {
            let name = mc.names.get(i).map(String::as_str).unwrap_or("");
            writeln!(s, r#"  <text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#, l.arc_x + 5.0, l.y(i) - 6.0, esc(name)).unwrap();
        }
    }
    for (k, c) in mc.components.iter().enumerate() {
        let plural = if c.segments.len() == 1 { "" } else { "s" };
        let mut line = format!("γ{}: {} → {}, {} segment{}", k, end_name(c.start), end_name(c.end), c.segments.len(), plural);
        if c.is_decorated() {
            let rows: Vec<String> = c
                .decoration
                .to_bit_rows()
                .iter()
                .map(|r| r.iter().map(|b| b.to_string()).collect::<String>())
                .collect();
            write!(line, ", X = [{}]", rows.join(" ")).unwrap();
        }
        writeln!(s, r#"  <text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#, o.margin, legend_top + 18.0 * k as f64, esc(&line)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use iotacurve::iota::{build_standard, lift_to_r, StandardParams};
    use iotacurve::precurve::run_pipeline;

    fn curve(p: &str) -> Multicurve {
        let c = build_standard(&p.parse::<StandardParams>().unwrap());
        run_pipeline(&lift_to_r(&c).unwrap()).unwrap().multicurve
    }

    #[test]
    fn deterministic_and_well_formed() {
        let mc = curve("C(+,-2)");
        let a = render_svg(&mc, &RenderOptions::default());
        assert_eq!(a, render_svg(&mc, &RenderOptions::default()));
        assert!(a.starts_with("<?xml"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("r=\"3.5\"").count(), 3);
        assert!(a.contains("γ0: U → Q, 2 segments"));
    }

    #[test]
    fn empty_curve_has_only_punctures() {
        use iotacurve::linalg::{F2Mat, PolyMat};
        use iotacurve::Precurve;
        let pc = Precurve::new(vec![], PolyMat::zeros(0, 0), PolyMat::zeros(0, 0), F2Mat::identity(0)).unwrap();
        let mc = Multicurve { names: vec![], components: vec![], precurve: pc };
        let svg = render_svg(&mc, &RenderOptions::default());
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(!svg.contains("stroke-width=\"2\""));
    }

    #[test]
    fn title_is_escaped() {
        let o = RenderOptions { title: Some("a<b".into()), ..RenderOptions::default() };
        assert!(render_svg(&curve("C(+,1)"), &o).contains("a&lt;b"));
    }
}
