//! Orientation predicates and the small constructions built on them.
//!
//! `orient` and `in_circle` are exact for all finite inputs: they run a
//! floating-point filter first and fall back to expansion arithmetic only
//! when the filter cannot certify the sign.

use super::point::{DirVector, Point};
use robust::Coord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }

    /// +1, -1 or 0.
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Ccw => 1,
            Orientation::Cw => -1,
            Orientation::Collinear => 0,
        }
    }
}

#[inline]
fn coord(p: Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Exact sign of the determinant of `(b - a, c - a)`.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    let det = robust::orient2d(coord(a), coord(b), coord(c));
    if det > 0.0 {
        Orientation::Ccw
    } else if det < 0.0 {
        Orientation::Cw
    } else {
        Orientation::Collinear
    }
}

/// Exact orientation sign as an integer (+1 ccw, -1 cw, 0 collinear).
#[inline]
pub fn orient_sign(a: Point, b: Point, c: Point) -> i8 {
    orient(a, b, c).sign()
}

/// Positive when `d` lies strictly inside the circumcircle of the ccw triangle
/// `(a, b, c)`, negative outside, zero on the circle.
pub fn in_circle(a: Point, b: Point, c: Point, d: Point) -> i8 {
    let v = robust::incircle(coord(a), coord(b), coord(c), coord(d));
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Classification of a point against a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleHit {
    Inside,
    /// On edge `i`, the edge from corner `i` to corner `(i + 1) % 3`.
    OnEdge(usize),
    OnVertex(usize),
    Outside,
}

impl TriangleHit {
    pub fn is_hit(self) -> bool {
        !matches!(self, TriangleHit::Outside)
    }
}

/// Signed perpendicular distance of `q` from the directed line `a -> b`;
/// positive on the left.
pub fn signed_line_distance(a: Point, b: Point, q: Point) -> f64 {
    let e = b - a;
    e.cross(q - a) / e.norm()
}

/// Minimum signed distance of `q` to the three edge lines of a ccw triangle,
/// together with the index of the edge attaining it.
pub fn min_edge_distance(q: Point, t: &[Point; 3]) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for i in 0..3 {
        let d = signed_line_distance(t[i], t[(i + 1) % 3], q);
        if d < best.0 {
            best = (d, i);
        }
    }
    best
}

/// Point-in-triangle test for a ccw, non-degenerate triangle.
///
/// With `eps == 0` the answer is exact. With `eps > 0`, points the exact test
/// rejects are still accepted as `OnEdge` of the nearest edge when their
/// signed distance to every edge line is at least `-eps`.
pub fn point_in_triangle(q: Point, t: &[Point; 3], eps: f64) -> TriangleHit {
    for (i, v) in t.iter().enumerate() {
        if *v == q {
            return TriangleHit::OnVertex(i);
        }
    }
    let mut collinear = None;
    let mut outside = false;
    for i in 0..3 {
        match orient(t[i], t[(i + 1) % 3], q) {
            Orientation::Ccw => {}
            Orientation::Cw => outside = true,
            Orientation::Collinear => collinear = Some(i),
        }
    }
    if !outside {
        return match collinear {
            Some(i) => TriangleHit::OnEdge(i),
            None => TriangleHit::Inside,
        };
    }
    if eps > 0.0 {
        let (d, i) = min_edge_distance(q, t);
        if d >= -eps {
            return TriangleHit::OnEdge(i);
        }
    }
    TriangleHit::Outside
}

/// First intersection of the ray `origin + λ·dir` (λ ≥ 0) with the closed
/// segment `seg`. A collinear overlap yields the overlap point nearest to the
/// origin.
pub fn ray_segment_intersection(
    origin: Point,
    dir: DirVector,
    seg: (Point, Point),
) -> Option<(Point, f64)> {
    let d = dir.as_point();
    let (a, b) = seg;
    let e = b - a;
    let denom = d.cross(e);
    let ao = a - origin;
    if denom == 0.0 {
        if ao.cross(d) != 0.0 {
            return None;
        }
        let dd = d.dot(d);
        let ta = ao.dot(d) / dd;
        let tb = (b - origin).dot(d) / dd;
        let (tmin, pmin, tmax) = if ta <= tb { (ta, a, tb) } else { (tb, b, ta) };
        if tmax < 0.0 {
            return None;
        }
        if tmin <= 0.0 {
            return Some((origin, 0.0));
        }
        return Some((pmin, tmin));
    }
    let t = ao.cross(e) / denom;
    let s = ao.cross(d) / denom;
    if t < 0.0 || !(0.0..=1.0).contains(&s) {
        return None;
    }
    let p = if s == 0.0 {
        a
    } else if s == 1.0 {
        b
    } else {
        a + e * s
    };
    Some((p, t))
}

/// Intersection of the line through `q` and `r` with the segment `a b`,
/// clamped to the segment. Used where the caller already knows (from exact
/// predicates) that the ray crosses the segment.
pub fn line_through_segment(q: Point, r: Point, a: Point, b: Point) -> Point {
    let d = r - q;
    let e = b - a;
    let denom = d.cross(e);
    if denom == 0.0 {
        // Parallel in floating point; the nearer endpoint is the best answer.
        return if (a - q).dot(d) <= (b - q).dot(d) { a } else { b };
    }
    let s = ((a - q).cross(d) / denom).clamp(0.0, 1.0);
    if s == 0.0 {
        a
    } else if s == 1.0 {
        b
    } else {
        a + e * s
    }
}

/// Distance from `p` to the closed segment `a b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.dist(a + e * t)
}

/// Do closed segments `a b` and `c d` share at least one point? Exact.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient_sign(a, b, c);
    let o2 = orient_sign(a, b, d);
    let o3 = orient_sign(c, d, a);
    let o4 = orient_sign(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment_collinear(a, b, c))
        || (o2 == 0 && on_segment_collinear(a, b, d))
        || (o3 == 0 && on_segment_collinear(c, d, a))
        || (o4 == 0 && on_segment_collinear(c, d, b))
}

/// Do the segments cross at a single point interior to both? Exact.
pub fn segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    orient_sign(a, b, c) * orient_sign(a, b, d) < 0 && orient_sign(c, d, a) * orient_sign(c, d, b) < 0
}

/// For `p` known to be collinear with `a b`: is it within the closed segment?
pub fn on_segment_collinear(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Is `p` on the closed segment `a b`? Exact.
pub fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == Orientation::Collinear && on_segment_collinear(a, b, p)
}

/// Shoelace signed area; positive for ccw.
pub fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        s += a.x * b.y - a.y * b.x;
    }
    0.5 * s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    const TRI: [Point; 3] = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];

    #[test]
    fn orient_basic() {
        assert_eq!(orient(p(0., 0.), p(1., 0.), p(0., 1.)), Orientation::Ccw);
        assert_eq!(orient(p(0., 0.), p(1., 1.), p(2., 2.)), Orientation::Collinear);
        assert_eq!(orient(p(0., 1.), p(1., 0.), p(0., 0.)), Orientation::Cw);
    }

    #[test]
    fn triangle_classification() {
        assert_eq!(point_in_triangle(p(0.25, 0.25), &TRI, 0.0), TriangleHit::Inside);
        assert_eq!(point_in_triangle(p(0.5, 0.0), &TRI, 0.0), TriangleHit::OnEdge(0));
        assert_eq!(point_in_triangle(p(0.0, 1.0), &TRI, 0.0), TriangleHit::OnVertex(2));
        assert_eq!(point_in_triangle(p(0.5, -1e-12), &TRI, 0.0), TriangleHit::Outside);
        assert_eq!(point_in_triangle(p(0.5, -1e-12), &TRI, 1e-9), TriangleHit::OnEdge(0));
        assert_eq!(point_in_triangle(p(0.5, -1e-3), &TRI, 1e-9), TriangleHit::Outside);
    }

    #[test]
    fn ray_segment_examples() {
        let right = DirVector::new(1.0, 0.0).unwrap();
        assert_eq!(
            ray_segment_intersection(p(5., 5.), right, (p(10., 0.), p(10., 10.))),
            Some((p(10., 5.), 5.0))
        );
        assert_eq!(ray_segment_intersection(p(5., 5.), right, (p(0., 0.), p(0., 10.))), None);
        assert_eq!(
            ray_segment_intersection(p(2., 5.), right, (p(4., 4.), p(4., 6.))),
            Some((p(4., 5.), 2.0))
        );
    }

    #[test]
    fn ray_segment_collinear_overlap() {
        let right = DirVector::new(1.0, 0.0).unwrap();
        assert_eq!(
            ray_segment_intersection(p(0., 0.), right, (p(5., 0.), p(3., 0.))),
            Some((p(3., 0.), 3.0))
        );
        assert_eq!(
            ray_segment_intersection(p(4., 0.), right, (p(5., 0.), p(3., 0.))),
            Some((p(4., 0.), 0.0))
        );
        assert_eq!(ray_segment_intersection(p(6., 0.), right, (p(5., 0.), p(3., 0.))), None);
    }

    #[test]
    fn segment_tests() {
        assert!(segments_intersect(p(0., 0.), p(2., 2.), p(0., 2.), p(2., 0.)));
        assert!(segments_cross_properly(p(0., 0.), p(2., 2.), p(0., 2.), p(2., 0.)));
        assert!(segments_intersect(p(0., 0.), p(2., 0.), p(2., 0.), p(3., 1.)));
        assert!(!segments_cross_properly(p(0., 0.), p(2., 0.), p(2., 0.), p(3., 1.)));
        assert!(!segments_intersect(p(0., 0.), p(1., 0.), p(2., 0.), p(3., 0.)));
    }
}
