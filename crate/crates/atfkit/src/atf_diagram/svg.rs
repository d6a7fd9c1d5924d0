use std::fmt::Write;

use super::visible::{detect_visible_lagrangian, VisibleKind};
use super::BaseDiagram;
use crate::exact_core::Point;

#[derive(Debug, Clone)]
pub struct SvgOptions {
    /// Side of the square canvas in pixels.
    pub size: f64,
    pub margin: f64,
    /// Draw the visible Lagrangian of every node that has one.
    pub show_visible: bool,
    /// Extra segments drawn in red.
    pub highlight: Vec<(Point, Point)>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { size: 400.0, margin: 20.0, show_visible: true, highlight: Vec::new() }
    }
}

struct View {
    min_x: f64,
    max_y: f64,
    scale: f64,
    margin: f64,
}

impl View {
    fn xy(&self, p: &Point) -> (f64, f64) {
        let (x, y) = p.to_f64();
        (self.margin + (x - self.min_x) * self.scale, self.margin + (self.max_y - y) * self.scale)
    }
}

/// Boundary solid, truncation edges dotted, cuts dashed, nodes as "×",
/// pinwheel termini as "⊗", visible Lagrangians in red. Output is a pure
/// function of the input.
pub fn render_svg(d: &BaseDiagram, opts: &SvgOptions) -> String {
    let pts: Vec<(f64, f64)> = d.vertices.iter().map(Point::to_f64).collect();
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
    let view = View { min_x, max_y, scale: (opts.size - 2.0 * opts.margin) / span, margin: opts.margin };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0:.0}" height="{0:.0}" viewBox="0 0 {0:.0} {0:.0}">"#,
        opts.size
    );
    if let Some(name) = &d.name {
        let _ = writeln!(s, "<title>{}</title>", escape(name));
    }
    let poly: Vec<String> = d.vertices.iter().map(|p| fmt_xy(view.xy(p))).collect();
    let _ = writeln!(s, r##"<polygon points="{}" fill="#e6e6e6" stroke="none"/>"##, poly.join(" "));
    let n = d.len();
    for i in 0..n {
        let (a, b) = (view.xy(d.vertex(i)), view.xy(d.vertex(i + 1)));
        let style = if d.is_truncation_edge(i) { r#" stroke-dasharray="1,4""# } else { "" };
        let _ = writeln!(s, r#"{}stroke="black" stroke-width="2"{style}/>"#, line(a, b));
    }
    for nd in &d.nodes {
        let _ = writeln!(s, r#"{}stroke="black" stroke-width="1" stroke-dasharray="6,4"/>"#, line(view.xy(&nd.position), view.xy(&nd.anchor)));
    }
    let mut red = opts.highlight.clone();
    let mut termini = Vec::new();
    if opts.show_visible {
        for i in 0..d.nodes.len() {
            if let Ok(r) = detect_visible_lagrangian(d, i) {
                if r.kind == VisibleKind::Pinwheel || r.kind == VisibleKind::Disk {
                    red.push(r.segment.clone());
                }
                if r.kind == VisibleKind::Pinwheel {
                    termini.push(r.segment.1.clone());
                }
            }
        }
    }
    for (a, b) in &red {
        let _ = writeln!(s, r#"{}stroke="red" stroke-width="2.5"/>"#, line(view.xy(a), view.xy(b)));
    }
    for nd in &d.nodes {
        let _ = writeln!(s, "{}", glyph(view.xy(&nd.position), "×"));
    }
    for t in &termini {
        let _ = writeln!(s, "{}", glyph(view.xy(t), "⊗"));
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_xy((x, y): (f64, f64)) -> String {
    format!("{x:.3},{y:.3}")
}

fn line(a: (f64, f64), b: (f64, f64)) -> String {
    format!(r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" "#, a.0, a.1, b.0, b.1)
}

fn glyph((x, y): (f64, f64), g: &str) -> String {
    format!(r#"<text x="{x:.3}" y="{y:.3}" font-size="16" text-anchor="middle" dominant-baseline="central">{g}</text>"#)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
