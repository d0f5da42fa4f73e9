//! Brute-force reference implementations with exact decisions.
//!
//! Nothing here depends on the mesh or the engine's predicates; the
//! environment is read directly.

pub mod exact;

use crate::geom::{Point, PolygonalEnvironment};
use exact::{between, dot_sign, orient, Param};
use std::cmp::Ordering;
use std::collections::HashMap;

pub use exact::RationalPoint;

pub struct Oracle<'a> {
    env: &'a PolygonalEnvironment,
    edges: Vec<(Point, Point)>,
    /// Environment vertex ids at each distinct point.
    at: HashMap<(u64, u64), Vec<usize>>,
    points: Vec<Point>,
}

/// Ccw position class of a direction: upper half-plane (incl. +x) first.
fn half(q: Point, v: Point) -> u8 {
    if v.y > q.y || (v.y == q.y && v.x > q.x) {
        0
    } else {
        1
    }
}

/// Order of collinear points along the line from `o` toward `t`.
fn along(o: Point, t: Point, a: Point, b: Point) -> Ordering {
    let (dx, dy) = (t.x - o.x, t.y - o.y);
    if dx.abs() >= dy.abs() {
        if dx > 0.0 { a.x.total_cmp(&b.x) } else { b.x.total_cmp(&a.x) }
    } else if dy > 0.0 {
        a.y.total_cmp(&b.y)
    } else {
        b.y.total_cmp(&a.y)
    }
}

impl<'a> Oracle<'a> {
    pub fn new(env: &'a PolygonalEnvironment) -> Oracle<'a> {
        let edges = env.edges().map(|(a, b)| (env.vertex(a), env.vertex(b))).collect();
        let mut at: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
        let mut points = Vec::new();
        for id in 0..env.num_vertices() {
            let p = env.vertex(id);
            let e = at.entry(p.bits()).or_default();
            if e.is_empty() {
                points.push(p);
            }
            e.push(id);
        }
        Oracle { env, edges, at, points }
    }

    /// Is `q` in the closed free space?
    pub fn contains(&self, q: Point) -> bool {
        let mut inside = false;
        for &(a, b) in &self.edges {
            let s = orient(a, b, q);
            if s == 0 && between(a, b, q) {
                return true;
            }
            if (a.y > q.y) != (b.y > q.y) {
                let up = if b.y > a.y { s } else { -s };
                if up > 0 {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Does the direction of the ray `o → t`, rotated infinitesimally by
    /// `perturb` (+1 ccw, −1 cw, 0 none), lead into the free space at `w`?
    /// `w` must lie on the line through `o` and `t`.
    fn free_dir_at(&self, w: Point, o: Point, t: Point, perturb: i8) -> bool {
        if let Some(ids) = self.at.get(&w.bits()) {
            return ids.iter().all(|&id| {
                let a = self.env.vertex(self.env.prev_vertex(id));
                let b = self.env.vertex(self.env.next_vertex(id));
                self.in_wedge(w, a, b, o, t, perturb)
            });
        }
        for &(c, e) in &self.edges {
            if orient(c, e, w) == 0 && between(c, e, w) {
                let mut s = -orient(o, t, e);
                if s == 0 {
                    s = perturb * dot_sign(c, e, o, t);
                }
                return s >= 0;
            }
        }
        true
    }

    /// Free wedge at `w` runs ccw from direction `w→b` to `w→a`.
    fn in_wedge(&self, w: Point, a: Point, b: Point, o: Point, t: Point, perturb: i8) -> bool {
        let mut c = -orient(o, t, b);
        let class_d = if c == 0 {
            let dot = dot_sign(w, b, o, t);
            if perturb != 0 {
                c = perturb * dot;
                if c > 0 { 1 } else { 3 }
            } else if dot > 0 {
                0
            } else {
                2
            }
        } else if c > 0 {
            1
        } else {
            3
        };
        let ct = orient(w, b, a);
        let class_to = if ct > 0 {
            1
        } else if ct < 0 {
            3
        } else {
            2
        };
        if class_d != class_to {
            return class_d < class_to;
        }
        if class_d == 0 || class_d == 2 {
            return true;
        }
        let mut s = orient(o, t, a);
        if s == 0 {
            s = -perturb * dot_sign(o, t, w, a);
        }
        s >= 0
    }

    /// How far the ray from `q` through `v` (optionally perturbed) stays in
    /// the free space.
    fn reach(&self, q: Point, v: Point, mode: i8) -> Param {
        let zero = Param::vertex(q, v, q);
        if !self.free_dir_at(q, q, v, mode) {
            return zero;
        }
        let mut best: Option<Param> = None;
        let mut offer = |p: Param| {
            if best.as_ref().is_none_or(|b| p.cmp(b) == Ordering::Less) {
                best = Some(p);
            }
        };
        for &(c, e) in &self.edges {
            let sc = orient(q, v, c);
            let se = orient(q, v, e);
            if sc * se < 0 {
                if orient(q, c, e) * se > 0 {
                    offer(Param::crossing(q, v, c, e));
                }
            } else if mode != 0 {
                if sc == 0 && se == mode && c != q && dot_sign(q, v, q, c) > 0 {
                    offer(Param::vertex(q, v, c));
                }
                if se == 0 && sc == mode && e != q && dot_sign(q, v, q, e) > 0 {
                    offer(Param::vertex(q, v, e));
                }
            }
        }
        if mode == 0 {
            for &w in &self.points {
                if w != q && orient(q, v, w) == 0 && dot_sign(q, v, q, w) > 0 && !self.free_dir_at(w, q, v, 0) {
                    offer(Param::vertex(q, v, w));
                }
            }
        }
        best.unwrap_or(zero)
    }

    /// Exact visibility polygon of `q` (ccw, antennas kept), or `None` if
    /// `q` is outside the free space.
    pub fn visibility_polygon(&self, q: Point) -> Option<Vec<Point>> {
        if !self.contains(q) {
            return None;
        }
        let mut dirs: Vec<Point> = self.points.iter().copied().filter(|&v| v != q).collect();
        dirs.sort_by(|&a, &b| {
            half(q, a).cmp(&half(q, b)).then_with(|| match orient(q, a, b) {
                1 => Ordering::Less,
                -1 => Ordering::Greater,
                _ => along(q, a, a, b),
            })
        });
        dirs.dedup_by(|b, a| half(q, *a) == half(q, *b) && orient(q, *a, *b) == 0);
        let mut out: Vec<Point> = Vec::with_capacity(dirs.len() * 3);
        for &v in &dirs {
            for mode in [-1, 0, 1] {
                let p = self.reach(q, v, mode).point();
                if out.last() != Some(&p) {
                    out.push(p);
                }
            }
        }
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        Some(out)
    }

    /// Is the closed segment `q p` inside the closed free space?
    pub fn segment_visible(&self, q: Point, p: Point) -> bool {
        if !self.contains(q) || !self.contains(p) {
            return false;
        }
        if q == p {
            return true;
        }
        for &(c, e) in &self.edges {
            if orient(q, p, c) * orient(q, p, e) < 0 && orient(c, e, q) * orient(c, e, p) < 0 {
                return false;
            }
        }
        let mut stops: Vec<Point> = self
            .points
            .iter()
            .copied()
            .filter(|&w| w != q && w != p && orient(q, p, w) == 0 && between(q, p, w))
            .collect();
        stops.sort_by(|&a, &b| along(q, p, a, b));
        std::iter::once(q).chain(stops).all(|s| self.free_dir_at(s, q, p, 0))
    }

    /// Environment vertex ids visible from `q`.
    pub fn visible_vertices(&self, q: Point) -> Vec<usize> {
        (0..self.env.num_vertices()).filter(|&i| self.segment_visible(q, self.env.vertex(i))).collect()
    }

    /// Pairs `(i, j)`, `i < j`, of mutually visible sites.
    pub fn graph(&self, sites: &[Point]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                if self.segment_visible(sites[i], sites[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::predicates::signed_area;
    use crate::geom::{validate_and_normalize, Ring};

    fn env(rings: &[&[(f64, f64)]]) -> PolygonalEnvironment {
        let rings = rings
            .iter()
            .map(|r| Ring::new(r.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap())
            .collect();
        validate_and_normalize(rings).unwrap().0
    }

    const SQ: &[(f64, f64)] = &[(0., 0.), (10., 0.), (10., 10.), (0., 10.)];
    const HOLE: &[(f64, f64)] = &[(4., 4.), (6., 4.), (6., 6.), (4., 6.)];

    #[test]
    fn segment_examples() {
        let e = env(&[SQ]);
        let o = Oracle::new(&e);
        assert!(o.segment_visible(Point::new(1., 1.), Point::new(9., 9.)));
        assert!(o.segment_visible(Point::new(0., 0.), Point::new(10., 0.)));
        assert!(!o.segment_visible(Point::new(5., 5.), Point::new(11., 5.)));
        let h = env(&[SQ, HOLE]);
        let o = Oracle::new(&h);
        assert!(!o.segment_visible(Point::new(2., 5.), Point::new(8., 5.)));
        assert!(o.segment_visible(Point::new(2., 4.), Point::new(8., 4.)));
        assert!(!o.segment_visible(Point::new(4., 4.), Point::new(6., 6.)));
        assert!(o.segment_visible(Point::new(4., 4.), Point::new(6., 4.)));
    }

    #[test]
    fn polygon_examples() {
        let e = env(&[SQ]);
        let o = Oracle::new(&e);
        let poly = o.visibility_polygon(Point::new(3., 7.)).unwrap();
        assert_eq!(poly.len(), 4);
        assert_eq!(signed_area(&poly), 100.0);
        let h = env(&[SQ, HOLE]);
        let o = Oracle::new(&h);
        let poly = o.visibility_polygon(Point::new(2., 5.)).unwrap();
        assert!(poly.contains(&Point::new(10., 1.)));
        assert!(poly.contains(&Point::new(10., 9.)));
        assert!(o.visibility_polygon(Point::new(5., 5.)).is_none());
        let vv = o.visible_vertices(Point::new(2., 5.));
        assert_eq!(vv, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn polygon_from_corner() {
        let h = env(&[SQ, HOLE]);
        let o = Oracle::new(&h);
        let poly = o.visibility_polygon(Point::new(0., 0.)).unwrap();
        let area = signed_area(&poly);
        // Shadow of the hole seen from the corner: two triangles behind it.
        let shadow = signed_area(&[Point::new(6., 4.), Point::new(10., 20. / 3.), Point::new(10., 10.), Point::new(6., 6.)])
            + signed_area(&[Point::new(4., 6.), Point::new(6., 6.), Point::new(10., 10.), Point::new(20. / 3., 10.)]);
        assert!((area - (100.0 - 4.0 - shadow)).abs() < 1e-12, "{area} {poly:?}");
        assert_eq!(o.graph(&[Point::new(0., 0.), Point::new(10., 0.), Point::new(10., 10.), Point::new(0., 10.)]).len(), 4);
    }
}
