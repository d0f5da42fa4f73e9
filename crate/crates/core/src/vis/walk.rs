//! Straight-line walks through the mesh along a ray.

use crate::geom::predicates::{line_through_segment, orient_sign};
use crate::geom::Point;
use crate::mesh::TriMesh;

/// Where a walk stops.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum WalkEnd {
    /// Crossed into a boundary edge at `point`.
    Edge { edge: usize, point: Point },
    /// The ray leaves the free space at a vertex.
    Vertex(usize),
    /// The target was reached before any boundary.
    Target,
}

#[derive(Clone, Debug)]
pub(crate) struct Walk {
    pub origin: Point,
    pub through: Point,
    pub end: WalkEnd,
    /// Vertices passed through, in order.
    pub vertices: Vec<usize>,
    /// Triangles entered, in order (including the start triangle).
    pub triangles: Vec<usize>,
}

impl Walk {
    pub fn end_point(&self, mesh: &TriMesh, target: Option<Point>) -> Point {
        match self.end {
            WalkEnd::Edge { point, .. } => point,
            WalkEnd::Vertex(v) => mesh.point(v),
            WalkEnd::Target => target.expect("target walk"),
        }
    }

    pub fn reached(&self) -> bool {
        self.end == WalkEnd::Target
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum WalkStart {
    Vertex(usize),
    Triangle(usize),
}

/// Orders two points known to lie on the line `o t` by their position along
/// the ray. Exact: compares coordinates on the dominant axis.
pub(crate) fn along(o: Point, t: Point, p: Point, r: Point) -> std::cmp::Ordering {
    let d = t - o;
    if d.x.abs() >= d.y.abs() {
        if d.x > 0.0 {
            p.x.total_cmp(&r.x)
        } else {
            r.x.total_cmp(&p.x)
        }
    } else if d.y > 0.0 {
        p.y.total_cmp(&r.y)
    } else {
        r.y.total_cmp(&p.y)
    }
}

/// Walks along the ray from `o` through `t`, starting at `start` (a vertex on
/// the ray, or a triangle whose closure contains `o`). With `target` set the
/// walk stops as soon as that point (on the ray) is reached.
pub(crate) fn walk(mesh: &TriMesh, start: WalkStart, o: Point, t: Point, target: Option<Point>) -> Walk {
    let mut w = Walk { origin: o, through: t, end: WalkEnd::Target, vertices: Vec::new(), triangles: Vec::new() };
    let side = |p: Point| orient_sign(o, t, p);
    let not_beyond = |p: Point, lim: Point| along(o, t, p, lim) != std::cmp::Ordering::Greater;

    // Exit edge (u, v) of the current triangle: u right of the ray, v left.
    let mut state = match start {
        WalkStart::Vertex(x) => State::AtVertex(x),
        WalkStart::Triangle(tr) => {
            w.triangles.push(tr);
            let tri = mesh.triangle(tr);
            let mut found = None;
            for k in 0..3 {
                let (a, b) = (tri.v[k], tri.v[(k + 1) % 3]);
                let (pa, pb) = (mesh.point(a), mesh.point(b));
                let (sa, sb) = (side(pa), side(pb));
                if sa == 0 && along(o, t, pa, o).is_gt() {
                    found = Some(State::ToVertex(a));
                } else if sb == 0 && along(o, t, pb, o).is_gt() {
                    found = Some(State::ToVertex(b));
                } else if sa < 0 && sb > 0 {
                    found = Some(State::Cross(tr, k));
                }
                if found.is_some() {
                    break;
                }
            }
            match found {
                Some(s) => s,
                None => {
                    // Degenerate start (o outside its located triangle).
                    w.end = match target {
                        Some(p) if p == o => WalkEnd::Target,
                        _ => WalkEnd::Edge { edge: tri.e[0], point: o },
                    };
                    return w;
                }
            }
        }
    };

    loop {
        match state {
            State::ToVertex(x) => {
                let px = mesh.point(x);
                if let Some(p) = target {
                    if not_beyond(p, px) {
                        w.end = WalkEnd::Target;
                        return w;
                    }
                }
                state = State::AtVertex(x);
            }
            State::AtVertex(x) => {
                w.vertices.push(x);
                let px = mesh.point(x);
                if let Some(p) = target {
                    if p == px {
                        w.end = WalkEnd::Target;
                        return w;
                    }
                }
                let mut next = None;
                'fans: for wedge in mesh.fans(x) {
                    for &tr in &wedge.triangles {
                        let tri = mesh.triangle(tr);
                        let k = tri.local(x).unwrap();
                        let (y, z) = (tri.v[(k + 1) % 3], tri.v[(k + 2) % 3]);
                        let (sy, sz) = (side(mesh.point(y)), side(mesh.point(z)));
                        if sy <= 0 && sz >= 0 {
                            w.triangles.push(tr);
                            next = Some(if sy == 0 {
                                State::ToVertex(y)
                            } else if sz == 0 {
                                State::ToVertex(z)
                            } else {
                                State::Cross(tr, (k + 1) % 3)
                            });
                            break 'fans;
                        }
                    }
                }
                match next {
                    Some(s) => state = s,
                    None => {
                        w.end = WalkEnd::Vertex(x);
                        return w;
                    }
                }
            }
            State::Cross(tr, k) => {
                let tri = mesh.triangle(tr);
                let (u, v) = (tri.v[k], tri.v[(k + 1) % 3]);
                let (pu, pv) = (mesh.point(u), mesh.point(v));
                if let Some(p) = target {
                    if orient_sign(pu, pv, p) >= 0 {
                        w.end = WalkEnd::Target;
                        return w;
                    }
                }
                match tri.nbr[k] {
                    None => {
                        let point = line_through_segment(o, t, pu, pv);
                        w.end = WalkEnd::Edge { edge: tri.e[k], point };
                        return w;
                    }
                    Some(n) => {
                        w.triangles.push(n);
                        let nt = mesh.triangle(n);
                        let j = nt.edge_to(tr).unwrap();
                        // nt.v[j] = v, nt.v[j+1] = u, far vertex at j+2.
                        let x = nt.v[(j + 2) % 3];
                        state = match side(mesh.point(x)) {
                            s if s > 0 => State::Cross(n, (j + 1) % 3),
                            s if s < 0 => State::Cross(n, (j + 2) % 3),
                            _ => State::ToVertex(x),
                        };
                    }
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum State {
    /// Moving along the ray toward vertex `x` inside the current triangle.
    ToVertex(usize),
    /// Standing on vertex `x`.
    AtVertex(usize),
    /// About to leave triangle `.0` through its local edge `.1`.
    Cross(usize, usize),
}
