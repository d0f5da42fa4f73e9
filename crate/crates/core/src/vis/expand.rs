use super::walk::{walk, Walk, WalkEnd, WalkStart};
use super::{AbstractVisibilityRegion, EdgeSegment, Element, VertexKind, VisQueryStats};
use crate::geom::predicates::{orient_sign, point_segment_distance};
use crate::geom::Point;
use crate::locate::{Coincidence, PointLocationResult};
use crate::mesh::TriMesh;

/// Hooks called during an expansion.
pub(crate) trait Visitor {
    /// Triangle entered; `view` is the (right, left) restriction pair, or
    /// `None` for start triangles, which are seen entirely.
    fn triangle(&mut self, _t: usize, _view: Option<(usize, usize)>) {}
    /// Vertex found inside the closed view.
    fn vertex(&mut self, _v: usize) {}
    /// Degenerate view followed along a ray.
    fn walk(&mut self, _w: &Walk) {}
    fn element(&mut self, _e: Element) {}
}

enum Task {
    /// Cross local edge `k` of triangle `t` (q on its left) with view `r..l`.
    Expand { t: usize, k: usize, r: usize, l: usize },
    /// Continue along the ray from the seed through vertex `x`.
    Ray(usize),
}

enum Start {
    Node(usize),
    Edge(usize, usize),
}

/// Seed point of the expansion: the snapped vertex if any, else `q`.
pub(crate) fn seed_of(mesh: &TriMesh, pl: &PointLocationResult, q: Point) -> Point {
    pl.snapped_vertex.map_or(q, |v| mesh.point(v))
}

/// Runs the triangular expansion from `q` and reports to `vis`.
pub(crate) fn expand(
    mesh: &TriMesh,
    pl: &PointLocationResult,
    q: Point,
    d: Option<f64>,
    vis: &mut impl Visitor,
) -> VisQueryStats {
    let seed = seed_of(mesh, pl, q);
    let mut stats = VisQueryStats::default();
    let mut starts = Vec::new();
    let mut start_tris = Vec::new();
    if let Some(v) = pl.snapped_vertex {
        for wedge in mesh.fans(v) {
            if !wedge.closed {
                starts.push(Start::Node(v));
            }
            for (t, k) in mesh.outer_fan_edges(v, wedge) {
                start_tris.push(t);
                starts.push(Start::Edge(t, k));
            }
        }
    } else {
        let t = pl.triangle;
        let tri = mesh.triangle(t);
        let shared = match pl.coincidence {
            Coincidence::OnEdge(e) if !mesh.edge(e).boundary => tri.e.iter().position(|&x| x == e),
            _ => None,
        };
        match shared {
            Some(k) => {
                let n = tri.nbr[k].expect("interior edge");
                let j = mesh.triangle(n).edge_to(t).unwrap();
                start_tris.extend([t, n]);
                starts.extend([
                    Start::Edge(t, (k + 1) % 3),
                    Start::Edge(t, (k + 2) % 3),
                    Start::Edge(n, (j + 1) % 3),
                    Start::Edge(n, (j + 2) % 3),
                ]);
            }
            None => {
                start_tris.push(t);
                starts.extend((0..3).map(|k| Start::Edge(t, k)));
            }
        }
    }
    for &t in &start_tris {
        stats.triangles_traversed += 1;
        vis.triangle(t, None);
        for v in mesh.triangle(t).v {
            vis.vertex(v);
        }
    }

    let mut stack = Vec::new();
    for s in starts {
        match s {
            Start::Node(v) => vis.element(Element::Node(v)),
            Start::Edge(t, k) => {
                let tri = mesh.triangle(t);
                let (a, b) = (tri.v[k], tri.v[(k + 1) % 3]);
                if orient_sign(seed, mesh.point(a), mesh.point(b)) <= 0 {
                    continue;
                }
                stack.push(Task::Expand { t, k, r: a, l: b });
                run(mesh, seed, d, &mut stack, &mut stats, vis);
            }
        }
    }
    stats
}

fn run(
    mesh: &TriMesh,
    seed: Point,
    d: Option<f64>,
    stack: &mut Vec<Task>,
    stats: &mut VisQueryStats,
    vis: &mut impl Visitor,
) {
    while let Some(task) = stack.pop() {
        let (t, k, r, l) = match task {
            Task::Expand { t, k, r, l } => (t, k, r, l),
            Task::Ray(x) => {
                let w = walk(mesh, WalkStart::Vertex(x), seed, mesh.point(x), None);
                stats.triangles_traversed += w.triangles.len();
                let (point, kind) = match w.end {
                    WalkEnd::Edge { edge, point } => (point, VertexKind::BoundaryIntersection(edge)),
                    WalkEnd::Vertex(v) => (mesh.point(v), VertexKind::EnvVertex(v)),
                    WalkEnd::Target => unreachable!("untargeted walk"),
                };
                vis.walk(&w);
                vis.element(Element::RayEnd { point, kind });
                continue;
            }
        };
        let tri = mesh.triangle(t);
        let (a, b) = (tri.v[k], tri.v[(k + 1) % 3]);
        let (pa, pb) = (mesh.point(a), mesh.point(b));
        let pr = mesh.point(r);
        let pl = mesh.point(l);
        let segment = |pruned| {
            Element::Segment(EdgeSegment {
                edge: tri.e[k],
                a,
                b,
                right: (orient_sign(seed, pr, pa) != 0).then_some(r),
                left: (orient_sign(seed, pl, pb) != 0).then_some(l),
                pruned,
            })
        };
        if let Some(d) = d {
            if point_segment_distance(seed, pa, pb) > d {
                vis.element(segment(true));
                continue;
            }
        }
        let Some(n) = tri.nbr[k] else {
            stats.boundary_edges_hit += 1;
            vis.element(segment(false));
            continue;
        };
        stats.triangles_traversed += 1;
        vis.triangle(n, Some((r, l)));
        let nt = mesh.triangle(n);
        let j = nt.edge_to(t).unwrap();
        let x = nt.v[(j + 2) % 3];
        let px = mesh.point(x);
        let sr = orient_sign(seed, pr, px);
        let sl = orient_sign(seed, pl, px);
        let right_edge = (j + 1) % 3;
        let left_edge = (j + 2) % 3;
        if sr < 0 {
            stack.push(Task::Expand { t: n, k: left_edge, r, l });
        } else if sl > 0 {
            stack.push(Task::Expand { t: n, k: right_edge, r, l });
        } else {
            vis.vertex(x);
            if sr > 0 && sl < 0 {
                stats.views_split += 1;
            }
            // Pushed left first so the right side is finished first.
            stack.push(if sl == 0 { Task::Ray(x) } else { Task::Expand { t: n, k: left_edge, r: x, l } });
            stack.push(if sr == 0 { Task::Ray(x) } else { Task::Expand { t: n, k: right_edge, r, l: x } });
        }
    }
}

struct RegionCollector(Vec<Element>);

impl Visitor for RegionCollector {
    fn element(&mut self, e: Element) {
        self.0.push(e);
    }
}

/// Computes the visibility region of `q` (limited to range `d` if given; the
/// result then still needs clipping to the disk).
pub fn visibility_region(
    mesh: &TriMesh,
    pl: &PointLocationResult,
    q: Point,
    d: Option<f64>,
) -> (AbstractVisibilityRegion, VisQueryStats) {
    let mut c = RegionCollector(Vec::new());
    let stats = expand(mesh, pl, q, d, &mut c);
    let region = AbstractVisibilityRegion {
        seed: seed_of(mesh, pl, q),
        seed_vertex: pl.snapped_vertex,
        radius: d,
        elements: c.0,
    };
    (region, stats)
}
