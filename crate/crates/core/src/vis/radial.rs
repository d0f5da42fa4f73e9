//! Concrete region boundaries: intersections, disk clipping, arc sampling.

use super::{AbstractVisibilityRegion, Element};
use crate::geom::predicates::{line_through_segment, orient_sign};
use crate::geom::Point;
use crate::mesh::TriMesh;
use serde::Serialize;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum RadialError {
    #[error("malformed region: restriction ray misses edge {edge}")]
    Malformed { edge: usize },
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("maximum arc angle must be positive, got {0}")]
    BadAngle(f64),
    #[error("region still contains arcs; sample them first")]
    HasArcs,
    #[error("region has no seed radius for arcs")]
    NoRadius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexKind {
    EnvVertex(usize),
    BoundaryIntersection(usize),
    ArcPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    OnBoundary(usize),
    FreeChord,
    /// Ccw circular arc about the seed.
    Arc,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialVertex {
    pub point: Point,
    pub kind: VertexKind,
}

/// Region boundary with concrete points. `edges[i]` joins vertex `i` to
/// vertex `i + 1` (cyclically).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialVisibilityRegion {
    pub seed: Point,
    pub radius: Option<f64>,
    pub vertices: Vec<RadialVertex>,
    pub edges: Vec<EdgeKind>,
}

impl RadialVisibilityRegion {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_arcs(&self) -> bool {
        self.edges.contains(&EdgeKind::Arc)
    }

    pub fn points(&self) -> Vec<Point> {
        self.vertices.iter().map(|v| v.point).collect()
    }

    fn push(&mut self, point: Point, kind: VertexKind, edge: EdgeKind) {
        self.vertices.push(RadialVertex { point, kind });
        self.edges.push(edge);
    }

    /// Drops bit-exact consecutive duplicates, keeping the later outgoing edge.
    fn merge_duplicates(&mut self) {
        let mut out_v: Vec<RadialVertex> = Vec::with_capacity(self.vertices.len());
        let mut out_e: Vec<EdgeKind> = Vec::with_capacity(self.edges.len());
        for (v, e) in self.vertices.iter().zip(&self.edges) {
            if let Some(last) = out_v.last_mut() {
                if last.point == v.point {
                    if let VertexKind::EnvVertex(_) = v.kind {
                        last.kind = v.kind;
                    }
                    *out_e.last_mut().unwrap() = *e;
                    continue;
                }
            }
            out_v.push(*v);
            out_e.push(*e);
        }
        while out_v.len() > 1 && out_v[0].point == out_v.last().unwrap().point {
            // The popped vertex's incoming edge now leads to vertex 0.
            let last = out_v.pop().unwrap();
            out_e.pop();
            if let VertexKind::EnvVertex(_) = last.kind {
                out_v[0].kind = last.kind;
            }
        }
        self.vertices = out_v;
        self.edges = out_e;
    }
}

/// Resolves view restrictions to intersection points.
pub fn to_radial(mesh: &TriMesh, abs: &AbstractVisibilityRegion) -> Result<RadialVisibilityRegion, RadialError> {
    let seed = abs.seed;
    let mut reg = RadialVisibilityRegion { seed, radius: abs.radius, vertices: Vec::new(), edges: Vec::new() };
    for el in &abs.elements {
        match *el {
            Element::Node(v) => reg.push(mesh.point(v), VertexKind::EnvVertex(v), EdgeKind::FreeChord),
            Element::RayEnd { point, kind } => reg.push(point, kind, EdgeKind::FreeChord),
            Element::Segment(s) => {
                let (pa, pb) = (mesh.point(s.a), mesh.point(s.b));
                let cut = |r: usize| -> Result<Point, RadialError> {
                    let pr = mesh.point(r);
                    if orient_sign(seed, pr, pa) > 0 || orient_sign(seed, pr, pb) < 0 {
                        return Err(RadialError::Malformed { edge: s.edge });
                    }
                    Ok(line_through_segment(seed, pr, pa, pb))
                };
                let (rp, rk) = match s.right {
                    None => (pa, VertexKind::EnvVertex(s.a)),
                    Some(r) => (cut(r)?, VertexKind::BoundaryIntersection(s.edge)),
                };
                let (lp, lk) = match s.left {
                    None => (pb, VertexKind::EnvVertex(s.b)),
                    Some(l) => (cut(l)?, VertexKind::BoundaryIntersection(s.edge)),
                };
                let along = if s.pruned { EdgeKind::FreeChord } else { EdgeKind::OnBoundary(s.edge) };
                reg.push(rp, rk, along);
                reg.push(lp, lk, EdgeKind::FreeChord);
            }
        }
    }
    reg.merge_duplicates();
    Ok(reg)
}

/// Parameters in [0,1] where segment `p→q` crosses the circle, sorted.
fn circle_hits(c: Point, d: f64, p: Point, q: Point) -> Vec<f64> {
    let e = q - p;
    let f = p - c;
    let a = e.dot(e);
    if a == 0.0 {
        return Vec::new();
    }
    let b = 2.0 * f.dot(e);
    let cc = f.dot(f) - d * d;
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    // Numerically stable roots.
    let qv = -0.5 * (b + b.signum() * s);
    let (mut t0, mut t1) = if qv == 0.0 { (0.0, 0.0) } else { (qv / a, cc / qv) };
    if t0 > t1 {
        std::mem::swap(&mut t0, &mut t1);
    }
    [t0, t1].into_iter().filter(|t| (0.0..=1.0).contains(t)).collect()
}

fn on_circle(c: Point, d: f64, p: Point) -> Point {
    let v = p - c;
    let n = v.norm();
    if n == 0.0 {
        return p;
    }
    c + v * (d / n)
}

/// Clips the region to the closed disk of radius `d` about the seed; the
/// parts of the boundary outside the disk become ccw arcs.
pub fn intersect_with_circle(reg: &RadialVisibilityRegion, d: f64) -> Result<RadialVisibilityRegion, RadialError> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(RadialError::BadRadius(d));
    }
    let c = reg.seed;
    let mut out = RadialVisibilityRegion { seed: c, radius: Some(d), vertices: Vec::new(), edges: Vec::new() };
    let n = reg.vertices.len();
    let inside = |p: Point| p.dist(c) <= d;
    for i in 0..n {
        let p = reg.vertices[i].point;
        let q = reg.vertices[(i + 1) % n].point;
        let kind = reg.edges[i];
        let pin = inside(p);
        let qin = inside(q);
        if pin {
            out.push(p, reg.vertices[i].kind, kind);
        }
        match (pin, qin) {
            (true, true) => {}
            (true, false) => {
                let ts = circle_hits(c, d, p, q);
                let t = ts.last().copied().unwrap_or(0.0);
                out.push(on_circle(c, d, p + (q - p) * t), VertexKind::ArcPoint, EdgeKind::Arc);
            }
            (false, true) => {
                let ts = circle_hits(c, d, p, q);
                let t = ts.first().copied().unwrap_or(1.0);
                out.push(on_circle(c, d, p + (q - p) * t), VertexKind::ArcPoint, kind);
            }
            (false, false) => {
                let ts = circle_hits(c, d, p, q);
                if ts.len() == 2 && ts[0] < ts[1] {
                    out.push(on_circle(c, d, p + (q - p) * ts[0]), VertexKind::ArcPoint, kind);
                    out.push(on_circle(c, d, p + (q - p) * ts[1]), VertexKind::ArcPoint, EdgeKind::Arc);
                }
            }
        }
    }
    if out.vertices.is_empty() {
        if n > 0 {
            out.push(Point::new(c.x + d, c.y), VertexKind::ArcPoint, EdgeKind::Arc);
        }
        return Ok(out);
    }
    // An arc between (nearly) coincident points is a tangency, not a full turn.
    let m = out.vertices.len();
    let tol = 1e-12 * d;
    let mut keep = vec![true; m];
    for i in 0..m {
        let j = (i + 1) % m;
        if i != j && out.edges[i] == EdgeKind::Arc && out.vertices[i].point.dist(out.vertices[j].point) <= tol {
            keep[j] = false;
            out.edges[i] = out.edges[j];
        }
    }
    if keep.iter().any(|k| !k) {
        let (vs, es): (Vec<_>, Vec<_>) = out
            .vertices
            .iter()
            .zip(&out.edges)
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|((v, e), _)| (*v, *e))
            .unzip();
        out.vertices = vs;
        out.edges = es;
    }
    out.merge_duplicates();
    Ok(out)
}

/// Replaces every arc by chords subtending at most `max_angle` each.
pub fn sample_arc_edges(reg: &RadialVisibilityRegion, max_angle: f64) -> Result<RadialVisibilityRegion, RadialError> {
    if !(max_angle > 0.0 && max_angle.is_finite()) {
        return Err(RadialError::BadAngle(max_angle));
    }
    if !reg.has_arcs() {
        return Ok(reg.clone());
    }
    let d = reg.radius.ok_or(RadialError::NoRadius)?;
    let c = reg.seed;
    let mut out = RadialVisibilityRegion { seed: c, radius: reg.radius, vertices: Vec::new(), edges: Vec::new() };
    let n = reg.vertices.len();
    for i in 0..n {
        let v = reg.vertices[i];
        if reg.edges[i] != EdgeKind::Arc {
            out.push(v.point, v.kind, reg.edges[i]);
            continue;
        }
        out.push(v.point, v.kind, EdgeKind::FreeChord);
        let w = reg.vertices[(i + 1) % n].point;
        let ta = (v.point.y - c.y).atan2(v.point.x - c.x);
        let tb = (w.y - c.y).atan2(w.x - c.x);
        let mut alpha = (tb - ta).rem_euclid(TAU);
        if n == 1 || alpha == 0.0 {
            alpha = TAU;
        }
        let steps = ((alpha / max_angle - 1e-9).ceil() as usize).max(1);
        for k in 1..steps {
            let th = ta + alpha * k as f64 / steps as f64;
            out.push(Point::new(c.x + d * th.cos(), c.y + d * th.sin()), VertexKind::ArcPoint, EdgeKind::FreeChord);
        }
    }
    Ok(out)
}

/// Boundary polygon of an arc-free region, ccw, without consecutive
/// duplicates. Zero-width spikes (antennas) are kept.
pub fn to_polygon(reg: &RadialVisibilityRegion) -> Result<Vec<Point>, RadialError> {
    if reg.has_arcs() {
        return Err(RadialError::HasArcs);
    }
    let mut pts: Vec<Point> = Vec::with_capacity(reg.vertices.len());
    for v in &reg.vertices {
        if pts.last() != Some(&v.point) {
            pts.push(v.point);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    Ok(pts)
}

/// Rotates a polygon so its lexicographically smallest vertex comes first,
/// after merging exact consecutive duplicates.
pub fn canonical_form(poly: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::with_capacity(poly.len());
    for &p in poly {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    if let Some(i) = (0..pts.len()).min_by(|&i, &j| pts[i].lex_cmp(&pts[j])) {
        pts.rotate_left(i);
    }
    pts
}
