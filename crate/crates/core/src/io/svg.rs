//! SVG rendering of environments and query results.

use crate::geom::{Point, PolygonalEnvironment};
use crate::vis::{EdgeKind, RadialVisibilityRegion};
use std::f64::consts::PI;
use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub enum Overlay {
    /// A region; arc edges are drawn as circular arcs.
    Region(RadialVisibilityRegion),
    Polygon(Vec<Point>),
    Graph { sites: Vec<Point>, edges: Vec<(usize, usize)> },
    Points(Vec<Point>),
    /// Segment from a query point to a hit point.
    Ray(Point, Point),
}

const REGION_FILL: &str = "#f0a020";

fn ring_path(s: &mut String, pts: &[Point]) {
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(s, "{}{} {} ", if i == 0 { "M" } else { "L" }, p.x, p.y);
    }
    s.push('Z');
}

fn region_path(r: &RadialVisibilityRegion) -> String {
    let mut s = String::new();
    let n = r.vertices.len();
    if n == 0 {
        return s;
    }
    let rad = r.radius.unwrap_or(0.0);
    let p0 = r.vertices[0].point;
    let _ = write!(s, "M{} {} ", p0.x, p0.y);
    for i in 0..n {
        let a = r.vertices[i].point;
        let b = r.vertices[(i + 1) % n].point;
        if r.edges[i] == EdgeKind::Arc {
            let ta = (a.y - r.seed.y).atan2(a.x - r.seed.x);
            let tb = (b.y - r.seed.y).atan2(b.x - r.seed.x);
            let mut sweep = tb - ta;
            if sweep <= 0.0 {
                sweep += 2.0 * PI;
            }
            if n == 1 {
                // full circle: split at the antipode
                let m = Point::new(2.0 * r.seed.x - a.x, 2.0 * r.seed.y - a.y);
                let _ = write!(s, "A{rad} {rad} 0 0 1 {} {} ", m.x, m.y);
                let _ = write!(s, "A{rad} {rad} 0 0 1 {} {} ", a.x, a.y);
            } else {
                let large = u8::from(sweep > PI);
                let _ = write!(s, "A{rad} {rad} 0 {large} 1 {} {} ", b.x, b.y);
            }
        } else {
            let _ = write!(s, "L{} {} ", b.x, b.y);
        }
    }
    s.push('Z');
    s
}

/// Deterministic SVG document. The y axis points up.
pub fn render_svg(env: &PolygonalEnvironment, overlays: &[Overlay]) -> String {
    let b = env.bbox();
    let span = b.width().max(b.height()).max(f64::MIN_POSITIVE);
    let m = 0.02 * span;
    let w = 0.002 * span;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        b.min.x - m,
        -(b.max.y + m),
        b.width() + 2.0 * m,
        b.height() + 2.0 * m,
        (800.0 * (b.height() + 2.0 * m) / (b.width() + 2.0 * m)).round(),
    );
    s.push_str("<g transform=\"scale(1,-1)\">\n");
    let mut d = String::new();
    for r in env.rings() {
        ring_path(&mut d, r.vertices());
        d.push(' ');
    }
    let _ = writeln!(s, r##"<path d="{}" fill="#dddddd" fill-rule="evenodd" stroke="#333333" stroke-width="{w}"/>"##, d.trim_end());
    for o in overlays {
        match o {
            Overlay::Region(r) => {
                let _ = writeln!(
                    s,
                    r#"<path d="{}" fill="{REGION_FILL}" fill-opacity="0.4" stroke="{REGION_FILL}" stroke-width="{w}"/>"#,
                    region_path(r)
                );
            }
            Overlay::Polygon(p) => {
                let mut d = String::new();
                ring_path(&mut d, p);
                let _ = writeln!(
                    s,
                    r#"<path d="{d}" fill="{REGION_FILL}" fill-opacity="0.4" stroke="{REGION_FILL}" stroke-width="{w}"/>"#
                );
            }
            Overlay::Graph { sites, edges } => {
                for &(i, j) in edges {
                    let (a, b) = (sites[i], sites[j]);
                    let _ = writeln!(
                        s,
                        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#2060c0" stroke-width="{}"/>"##,
                        a.x,
                        a.y,
                        b.x,
                        b.y,
                        w * 0.5
                    );
                }
                for p in sites {
                    let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="{}" fill="#2060c0"/>"##, p.x, p.y, 2.0 * w);
                }
            }
            Overlay::Points(pts) => {
                for p in pts {
                    let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="{}" fill="#c02020"/>"##, p.x, p.y, 2.5 * w);
                }
            }
            Overlay::Ray(q, h) => {
                let _ = writeln!(
                    s,
                    r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c02020" stroke-width="{w}"/>"##,
                    q.x, q.y, h.x, h.y
                );
                let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="{}" fill="#c02020"/>"##, h.x, h.y, 2.0 * w);
            }
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}
