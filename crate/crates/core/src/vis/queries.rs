//! Query adaptations built on the expansion and on ray walks.

use super::expand::{expand, seed_of, Visitor};
use super::walk::{along, walk, Walk, WalkEnd, WalkStart};
use super::VisQueryStats;
use crate::geom::predicates::orient_sign;
use crate::geom::{DirVector, EpsilonConfig, Point};
use crate::locate::{BucketGrid, Coincidence, PointLocationResult};
use crate::mesh::TriMesh;
use std::collections::HashSet;

fn start_of(pl: &PointLocationResult) -> WalkStart {
    match pl.snapped_vertex {
        Some(v) => WalkStart::Vertex(v),
        None => WalkStart::Triangle(pl.triangle),
    }
}

fn walk_stats(w: &Walk) -> VisQueryStats {
    VisQueryStats { triangles_traversed: w.triangles.len(), views_split: 0, boundary_edges_hit: 0 }
}

/// Is the closed segment from `q` to `p` inside the free space (and no
/// longer than `d`)? Only triangles crossed by the segment are visited.
pub fn two_point_visible(
    mesh: &TriMesh,
    pl: &PointLocationResult,
    q: Point,
    p: Point,
    d: Option<f64>,
) -> (bool, VisQueryStats) {
    let seed = seed_of(mesh, pl, q);
    if d.is_some_and(|d| seed.dist(p) > d) {
        return (false, VisQueryStats::default());
    }
    if p == seed {
        return (true, VisQueryStats::default());
    }
    let w = walk(mesh, start_of(pl), seed, p, Some(p));
    (w.reached(), walk_stats(&w))
}

/// Triangles visited by a two-point query, in order.
pub fn two_point_traversal(mesh: &TriMesh, pl: &PointLocationResult, q: Point, p: Point) -> Vec<usize> {
    let seed = seed_of(mesh, pl, q);
    if p == seed {
        return Vec::new();
    }
    walk(mesh, start_of(pl), seed, p, Some(p)).triangles
}

/// First boundary point hit by the ray from `q` in direction `u`, or `None`
/// if it lies farther than `d`. From a boundary point the ray is followed
/// into the free space when `u` points inward.
pub fn shoot_ray(
    mesh: &TriMesh,
    pl: &PointLocationResult,
    q: Point,
    u: DirVector,
    d: Option<f64>,
) -> (Option<Point>, VisQueryStats) {
    let seed = seed_of(mesh, pl, q);
    // Scale by a power of two (exact) so the through point is well separated.
    let bb = mesh.bbox();
    let span = bb.width().max(bb.height()).max(f64::MIN_POSITIVE);
    let mut dir = u.as_point();
    while dir.norm() < span {
        dir = dir * 2.0;
    }
    let mut through = seed + dir;
    while through == seed {
        dir = dir * 2.0;
        through = seed + dir;
    }
    let w = walk(mesh, start_of(pl), seed, through, None);
    let hit = match w.end {
        WalkEnd::Edge { point, .. } => point,
        WalkEnd::Vertex(v) => mesh.point(v),
        WalkEnd::Target => unreachable!("untargeted walk"),
    };
    let stats = walk_stats(&w);
    if d.is_some_and(|d| seed.dist(hit) > d) {
        return (None, stats);
    }
    (Some(hit), stats)
}

struct VertexCollector<'a> {
    mesh: &'a TriMesh,
    seed: Point,
    d: Option<f64>,
    filter: Option<&'a HashSet<usize>>,
    seen: HashSet<usize>,
}

impl VertexCollector<'_> {
    fn add(&mut self, v: usize) {
        if self.filter.is_some_and(|f| !f.contains(&v)) {
            return;
        }
        if self.d.is_some_and(|d| self.seed.dist(self.mesh.point(v)) > d) {
            return;
        }
        self.seen.insert(v);
    }
}

impl Visitor for VertexCollector<'_> {
    fn vertex(&mut self, v: usize) {
        self.add(v);
    }

    fn walk(&mut self, w: &Walk) {
        for &v in &w.vertices {
            self.add(v);
        }
    }
}

/// Mesh vertices visible from `q`, sorted, optionally restricted to `filter`
/// and to range `d`.
pub fn visible_vertices(
    mesh: &TriMesh,
    pl: &PointLocationResult,
    q: Point,
    filter: Option<&HashSet<usize>>,
    d: Option<f64>,
) -> (Vec<usize>, VisQueryStats) {
    let mut c = VertexCollector { mesh, seed: seed_of(mesh, pl, q), d, filter, seen: HashSet::new() };
    let stats = expand(mesh, pl, q, d, &mut c);
    let mut out: Vec<usize> = c.seen.into_iter().collect();
    out.sort_unstable();
    (out, stats)
}

/// Located sites bucketed by the triangles whose closure contains them.
#[derive(Clone, Debug)]
pub struct SiteIndex {
    points: Vec<Point>,
    by_triangle: Vec<Vec<usize>>,
    unlocated: Vec<usize>,
}

impl SiteIndex {
    /// Locates every site and stores it.
    pub fn build(mesh: &TriMesh, grid: &BucketGrid, cfg: &EpsilonConfig, sites: &[Point]) -> SiteIndex {
        let located: Vec<(Point, Option<PointLocationResult>)> =
            sites.iter().map(|&p| (p, grid.locate(mesh, p, cfg))).collect();
        SiteIndex::from_located(mesh, &located)
    }

    /// Sites on an edge are stored in both incident triangles and sites on a
    /// vertex in its whole fan; a snapped site stands for its vertex.
    pub fn from_located(mesh: &TriMesh, sites: &[(Point, Option<PointLocationResult>)]) -> SiteIndex {
        let mut by_triangle = vec![Vec::new(); mesh.num_triangles()];
        let mut points = Vec::with_capacity(sites.len());
        let mut unlocated = Vec::new();
        for (i, (p, pl)) in sites.iter().enumerate() {
            let Some(pl) = pl else {
                points.push(*p);
                unlocated.push(i);
                continue;
            };
            let vertex = pl.snapped_vertex.or(match pl.coincidence {
                Coincidence::OnVertex(v) => Some(v),
                _ => None,
            });
            match (vertex, pl.coincidence) {
                (Some(v), _) => {
                    points.push(mesh.point(v));
                    for w in mesh.fans(v) {
                        for &t in &w.triangles {
                            by_triangle[t].push(i);
                        }
                    }
                }
                (None, Coincidence::OnEdge(e)) => {
                    points.push(*p);
                    for t in mesh.edge(e).tris.iter().flatten() {
                        by_triangle[*t].push(i);
                    }
                }
                _ => {
                    points.push(*p);
                    by_triangle[pl.triangle].push(i);
                }
            }
        }
        SiteIndex { points, by_triangle, unlocated }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Effective position of site `i` (its vertex if snapped).
    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    /// Sites that could not be located.
    pub fn unlocated(&self) -> &[usize] {
        &self.unlocated
    }
}

/// Indices of visible sites plus those skipped because they could not be located.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VisiblePoints {
    pub visible: Vec<usize>,
    pub unlocated: Vec<usize>,
}

struct PointCollector<'a> {
    mesh: &'a TriMesh,
    sites: &'a SiteIndex,
    seed: Point,
    d: Option<f64>,
    seen: Vec<bool>,
}

impl PointCollector<'_> {
    fn in_range(&self, s: Point) -> bool {
        self.d.is_none_or(|d| self.seed.dist(s) <= d)
    }
}

impl Visitor for PointCollector<'_> {
    fn triangle(&mut self, t: usize, view: Option<(usize, usize)>) {
        for &i in &self.sites.by_triangle[t] {
            if self.seen[i] {
                continue;
            }
            let s = self.sites.points[i];
            let inside = match view {
                None => true,
                Some((r, l)) => {
                    orient_sign(self.seed, self.mesh.point(r), s) >= 0
                        && orient_sign(self.seed, self.mesh.point(l), s) <= 0
                }
            };
            if inside && self.in_range(s) {
                self.seen[i] = true;
            }
        }
    }

    fn walk(&mut self, w: &Walk) {
        let end = w.end_point(self.mesh, None);
        for &t in &w.triangles {
            for &i in &self.sites.by_triangle[t] {
                let s = self.sites.points[i];
                if !self.seen[i]
                    && orient_sign(w.origin, w.through, s) == 0
                    && along(w.origin, w.through, s, w.origin).is_ge()
                    && along(w.origin, w.through, s, end).is_le()
                    && self.in_range(s)
                {
                    self.seen[i] = true;
                }
            }
        }
    }
}

/// Sites visible from `q` (within range `d` if given), sorted.
pub fn visible_points(
    mesh: &TriMesh,
    pl: &PointLocationResult,
    q: Point,
    sites: &SiteIndex,
    d: Option<f64>,
) -> (VisiblePoints, VisQueryStats) {
    let mut c = PointCollector { mesh, sites, seed: seed_of(mesh, pl, q), d, seen: vec![false; sites.len()] };
    let stats = expand(mesh, pl, q, d, &mut c);
    let visible = (0..sites.len()).filter(|&i| c.seen[i]).collect();
    (VisiblePoints { visible, unlocated: sites.unlocated.clone() }, stats)
}
